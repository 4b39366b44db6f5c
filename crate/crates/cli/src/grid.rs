//! `start:stop:step` grids and comma lists.

/// Largest number of points a grid may expand to.
pub const GRID_CAP: usize = 10_000_000;

/// Parses `start:stop:step` (stop included when hit within rounding), a
/// comma-separated list, or a single number.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("'{t}' is not a finite number"))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => {
            let v = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
            if v.is_empty() {
                return Err("empty grid".into());
            }
            Ok(v)
        }
        3 => {
            let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if !(step > 0.0) {
                return Err(format!("grid step must be positive, got {step}"));
            }
            if stop < start {
                return Err(format!("grid stop {stop} is below start {start}"));
            }
            let span = (stop - start) / step;
            if span >= GRID_CAP as f64 {
                return Err(format!("grid has more than {GRID_CAP} points"));
            }
            let count = (span + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(format!("grid '{s}' is not start:stop:step")),
    }
}

/// Integer grid such as `0:8:1` or `0,2,5`.
pub fn parse_int_grid(s: &str) -> Result<Vec<i64>, String> {
    parse_grid(s)?
        .into_iter()
        .map(|x| {
            if x.fract() == 0.0 && x.abs() < 1e15 {
                Ok(x as i64)
            } else {
                Err(format!("{x} is not an integer"))
            }
        })
        .collect()
}
