//! Grid specifications: `a,b,c` or inclusive `start:stop:step`.

const MAX_POINTS: usize = 1_000_000;

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("not a number: {:?}", s.trim()))?;
    if !v.is_finite() {
        return Err(format!("not finite: {:?}", s.trim()));
    }
    Ok(v)
}

/// Parses a grid. Ranges include `stop` when it lies on the step lattice
/// (to within a millionth of a step); points are `start + i * step`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err("empty grid".into());
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(format!("range must be start:stop:step, got {spec:?}"));
        };
        let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
        if !(step > 0.0) {
            return Err(format!("step must be positive, got {step}"));
        }
        if stop < start {
            return Err(format!("stop {stop} is below start {start}"));
        }
        let n = ((stop - start) / step + 1e-6).floor() + 1.0;
        if n > MAX_POINTS as f64 {
            return Err(format!("range has more than {MAX_POINTS} points"));
        }
        return Ok((0..n as usize).map(|i| start + i as f64 * step).collect());
    }
    spec.split(',').map(number).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list() {
        assert_eq!(
            parse_grid("0, 30,60,300").unwrap(),
            vec![0.0, 30.0, 60.0, 300.0]
        );
        assert_eq!(parse_grid("-5").unwrap(), vec![-5.0]);
    }

    #[test]
    fn inclusive_range() {
        let g = parse_grid("0:45:2.5").unwrap();
        assert_eq!(g.len(), 19);
        assert_eq!(g[18], 45.0);
        let l = parse_grid("-300:300:30").unwrap();
        assert_eq!(l.len(), 21);
        assert_eq!(l[10], 0.0);
        assert_eq!(parse_grid("0:1:0.4").unwrap().len(), 3);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in [
            "",
            "1,,2",
            "a",
            "0:1",
            "0:1:0",
            "1:0:1",
            "0:1:-1",
            "nan",
            "0:1e9:1e-3",
        ] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }
}
