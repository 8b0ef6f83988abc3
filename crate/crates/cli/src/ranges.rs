//! Parsing for list-valued flags such as `--n 2,4:6` and `--p 0.1:0.9:0.1`.

/// Comma-separated integers and inclusive `a:b` ranges, in the order given.
pub fn parse_ints(text: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        let int = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| format!("expected an integer, got {s:?}"))
        };
        match item.split_once(':') {
            Some((a, b)) => {
                let (a, b) = (int(a)?, int(b)?);
                if a > b {
                    return Err(format!("empty range {item:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(int(item)?),
        }
    }
    Ok(out)
}

/// Comma-separated reals, or a single `start:stop:step` grid with both ends
/// included when they fall on the grid.
pub fn parse_reals(text: &str) -> Result<Vec<f64>, String> {
    let real = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("expected a number, got {s:?}"))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (real(start)?, real(stop)?, real(step)?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(format!("bad grid {text:?}"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as u64;
            // multiply rather than accumulate so 0.1 + 0.1 + .. drift stays out
            Ok((0..=count)
                .map(|i| start + i as f64 * step)
                .map(|p| (p * 1e12).round() / 1e12)
                .collect())
        }
        [_] => text.split(',').map(real).collect(),
        _ => Err(format!("expected a list or start:stop:step, got {text:?}")),
    }
}
