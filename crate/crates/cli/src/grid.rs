//! Grid and list syntax for command-line values.

use std::str::FromStr;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;

/// `start:stop:step` (inclusive, endpoint snapped within half a step) or a
/// single number.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        match parts.as_slice() {
            [single] => {
                if single.is_empty() {
                    bail!("empty grid");
                }
                Ok(Grid(vec![number(single)?]))
            }
            [start, stop, step] => {
                let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
                if step.is_nan() || step <= 0.0 {
                    bail!("grid step must be > 0, got {step}");
                }
                if stop < start {
                    bail!("grid stop {stop} is below start {start}");
                }
                let n = ((stop - start) / step + 0.5).floor() as usize;
                let mut values: Vec<f64> = (0..=n).map(|i| start + i as f64 * step).collect();
                if let Some(last) = values.last_mut() {
                    if (*last - stop).abs() <= 0.5 * step {
                        *last = stop;
                    }
                }
                Ok(Grid(values))
            }
            _ => bail!("expected VALUE or START:STOP:STEP, got '{s}'"),
        }
    }
}

/// `lo:hi:n` with `n` the number of points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl FromStr for Span {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [lo, hi, n] = parts.as_slice() else {
            bail!("expected LO:HI:N, got '{s}'");
        };
        let count: usize = n
            .parse()
            .with_context(|| format!("bad point count '{n}'"))?;
        if count == 0 {
            bail!("point count must be >= 1");
        }
        Ok(Span {
            lo: number(lo)?,
            hi: number(hi)?,
            count,
        })
    }
}

/// Comma-separated reals.
#[derive(Debug, Clone, PartialEq)]
pub struct RealList(pub Vec<f64>);

impl FromStr for RealList {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|v| number(v.trim()))
            .collect::<Result<_>>()
            .map(RealList)
    }
}

/// Comma-separated complex numbers such as `1`, `0.5-2i`, `3i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexList(pub Vec<Complex64>);

impl FromStr for ComplexList {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|v| {
                let v = v.trim();
                Complex64::from_str(v).map_err(|_| anyhow::anyhow!("bad complex number '{v}'"))
            })
            .collect::<Result<_>>()
            .map(ComplexList)
    }
}

fn number(s: &str) -> Result<f64> {
    let v: f64 = s.parse().with_context(|| format!("bad number '{s}'"))?;
    if !v.is_finite() {
        bail!("number must be finite, got '{s}'");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_range() {
        let g: Grid = "0:0.06:0.01".parse().unwrap();
        assert_eq!(g.0.len(), 7);
        assert_eq!(g.0[0], 0.0);
        assert_eq!(g.0[6], 0.06);
    }

    #[test]
    fn endpoint_within_half_step() {
        let g: Grid = "0:1.04:0.1".parse().unwrap();
        assert_eq!(g.0.len(), 11);
        assert_eq!(*g.0.last().unwrap(), 1.04);
        let g: Grid = "0:1.06:0.1".parse().unwrap();
        assert_eq!(g.0.len(), 12);
    }

    #[test]
    fn single_value() {
        assert_eq!("0.3".parse::<Grid>().unwrap().0, vec![0.3]);
    }

    #[test]
    fn bad_grids() {
        for s in ["", "a", "0:1", "0:1:0", "1:0:0.1", "0:1:-0.1", "0:inf:1"] {
            assert!(s.parse::<Grid>().is_err(), "{s}");
        }
    }

    #[test]
    fn spans() {
        let s: Span = "1.002:1.11:20".parse().unwrap();
        assert_eq!(s.count, 20);
        assert!("1:2:0".parse::<Span>().is_err());
        assert!("1:2".parse::<Span>().is_err());
    }

    #[test]
    fn complex_lists() {
        let c: ComplexList = "1, 0.5-2i,3i".parse().unwrap();
        assert_eq!(
            c.0,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, -2.0),
                Complex64::new(0.0, 3.0)
            ]
        );
        assert!("1,x".parse::<ComplexList>().is_err());
    }
}
