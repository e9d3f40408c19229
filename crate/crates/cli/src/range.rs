//! Sweep axes given on the command line as `min:max:steps` or a single value.

use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    Fixed(f64),
    Range { min: f64, max: f64, steps: usize },
}

impl Axis {
    /// Grid values, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Axis::Fixed(v) => vec![v],
            Axis::Range { min, max, steps } => (0..steps)
                .map(|k| {
                    if k + 1 == steps {
                        max
                    } else {
                        min + (max - min) * k as f64 / (steps - 1) as f64
                    }
                })
                .collect(),
        }
    }

    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            Axis::Fixed(v) => (v, v),
            Axis::Range { min, max, .. } => (min, max),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Fixed(v) => write!(f, "{v}"),
            Axis::Range { min, max, steps } => write!(f, "{min}:{max}:{steps}"),
        }
    }
}

/// A real number, optionally written with `pi`: `1.5`, `pi`, `-pi/2`,
/// `3pi/4`, `2*pi`.
pub fn parse_scalar(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    if t.is_empty() {
        return Err("empty value".into());
    }
    let value = match t.find("pi") {
        None => t.parse::<f64>().map_err(|_| format!("not a number: {s:?}"))?,
        Some(pos) => {
            let coeff = t[..pos].trim_end_matches('*');
            let coeff = match coeff {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| format!("bad multiple of pi: {s:?}"))?,
            };
            let rest = &t[pos + 2..];
            let divisor = match rest {
                "" => 1.0,
                r if r.starts_with('/') => r[1..]
                    .parse::<f64>()
                    .map_err(|_| format!("bad divisor in {s:?}"))?,
                _ => return Err(format!("unexpected text after pi in {s:?}")),
            };
            coeff * PI / divisor
        }
    };
    if !value.is_finite() {
        return Err(format!("non-finite value {s:?}"));
    }
    Ok(value)
}

pub fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(Axis::Fixed(parse_scalar(v)?)),
        [a, b, n] => {
            let (min, max) = (parse_scalar(a)?, parse_scalar(b)?);
            let steps: usize = n
                .trim()
                .parse()
                .map_err(|_| format!("steps must be an integer in {s:?}"))?;
            if steps < 2 {
                return Err(format!("need at least 2 steps in {s:?}"));
            }
            if min >= max {
                return Err(format!("need min < max in {s:?}"));
            }
            Ok(Axis::Range { min, max, steps })
        }
        _ => Err(format!("expected a value or min:max:steps, got {s:?}")),
    }
}
