use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use iwt_core::grid::{DecayClass, GridFunction};
use iwt_core::transform::TransformResult;
use num_complex::Complex64;

use crate::fail::{CliError, CliResult};

/// Parses `1.5`, `-2i`, `0.5+3i`, `1e-3-2.5e1i` and `re,im`.
pub fn complex(s: &str) -> CliResult<Complex64> {
    let bad = || CliError::usage(format!("'{s}' is not a number (expected re, re,im or re+imi)"));
    let t = s.trim();
    if let Some((re, im)) = t.split_once(',') {
        return Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0));
    };
    // the split is the last sign that does not belong to an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let coef = |p: &str| -> CliResult<f64> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => Ok(Complex64::new(body[..k].parse().map_err(|_| bad())?, coef(&body[k..])?)),
        None => Ok(Complex64::new(0.0, coef(body)?)),
    }
}

/// `lo:step:hi` (inclusive) or a single value.
pub fn tau_range(s: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::usage(format!("tau range '{s}' must be lo:step:hi or a single value"));
    let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    match parts[..] {
        [t] if t >= 0.0 => Ok(vec![t]),
        [lo, step, hi] if lo >= 0.0 && step > 0.0 && hi >= lo => {
            let n = ((hi - lo) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|k| lo + step * k as f64).collect())
        }
        _ => Err(bad()),
    }
}

/// `p0,pinf,rate`: `f ~ x^p0` at the origin, `f ~ x^pinf e^{-rate x}` at infinity.
pub fn decay(s: &str) -> CliResult<DecayClass> {
    let bad = || CliError::usage(format!("decay '{s}' must be p0,pinf,rate"));
    let v: Vec<f64> = s.split(',').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    match v[..] {
        [p0, pinf, rate] if v.iter().all(|x| x.is_finite()) => Ok(DecayClass::new(p0, pinf, rate)),
        _ => Err(bad()),
    }
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn read_grid(path: &Path, decay: DecayClass) -> CliResult<GridFunction> {
    GridFunction::read_csv(open(path)?, decay).map_err(|e| CliError::from(e).in_file(path))
}

pub fn read_transform(path: &Path, a: f64) -> CliResult<TransformResult> {
    TransformResult::read_csv(open(path)?, a).map_err(|e| CliError::from(e).in_file(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(complex("1.5").unwrap(), c(1.5, 0.0));
        assert_eq!(complex("-2i").unwrap(), c(0.0, -2.0));
        assert_eq!(complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(complex("0.5+3i").unwrap(), c(0.5, 3.0));
        assert_eq!(complex("1e-3-2.5e1i").unwrap(), c(1e-3, -25.0));
        assert_eq!(complex("-1-i").unwrap(), c(-1.0, -1.0));
        assert_eq!(complex("2, -1").unwrap(), c(2.0, -1.0));
        assert!(complex("abc").is_err());
        assert!(complex("1+xi").is_err());
    }

    #[test]
    fn tau_ranges() {
        assert_eq!(tau_range("0:0.5:2").unwrap(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(tau_range("0:0.1:5").unwrap().len(), 51);
        assert_eq!(tau_range("1.25").unwrap(), vec![1.25]);
        assert!(tau_range("2:0.1:1").is_err());
        assert!(tau_range("0:0:1").is_err());
        assert!(tau_range("-1").is_err());
    }

    #[test]
    fn decay_classes() {
        assert_eq!(decay("1, 2, 0.5").unwrap(), DecayClass::new(1.0, 2.0, 0.5));
        assert!(decay("1,2").is_err());
    }
}
