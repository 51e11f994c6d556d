use otk_core::{OtkError, Result};

/// Where the success curve falls through one half.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub rho: f64,
    /// `true` when the curve never crossed inside the grid and `rho` is a boundary.
    pub extrapolated: bool,
}

/// First downward crossing of rate 0.5 by the piecewise-linear interpolation
/// of `(rho, rate)` points sorted by `rho`. Without a crossing the result is
/// the lower boundary (curve starts below 0.5) or the upper boundary (curve
/// never drops below 0.5), flagged as extrapolated.
pub fn transition_point(points: &[(f64, f64)]) -> Result<Transition> {
    let Some(&(first_rho, first_rate)) = points.first() else {
        return Err(OtkError::Argument("transition needs at least one point".into()));
    };
    if points
        .windows(2)
        .any(|w| w[0].0.partial_cmp(&w[1].0) != Some(std::cmp::Ordering::Less))
    {
        return Err(OtkError::Argument(
            "transition points must be strictly increasing in rho".into(),
        ));
    }
    if first_rate < 0.5 {
        return Ok(Transition {
            rho: first_rho,
            extrapolated: true,
        });
    }
    for w in points.windows(2) {
        let ((r0, s0), (r1, s1)) = (w[0], w[1]);
        if s0 >= 0.5 && s1 < 0.5 {
            return Ok(Transition {
                rho: r0 + (s0 - 0.5) / (s0 - s1) * (r1 - r0),
                extrapolated: false,
            });
        }
    }
    Ok(Transition {
        rho: points[points.len() - 1].0,
        extrapolated: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_step() {
        let t = transition_point(&[(0.1, 1.0), (0.2, 0.0)]).unwrap();
        assert!((t.rho - 0.15).abs() < 1e-15 && !t.extrapolated);
    }

    #[test]
    fn no_crossing() {
        let t = transition_point(&[(0.1, 1.0), (0.2, 1.0), (0.3, 0.9)]).unwrap();
        assert_eq!(
            t,
            Transition {
                rho: 0.3,
                extrapolated: true
            }
        );
        let t = transition_point(&[(0.1, 0.2), (0.2, 0.0)]).unwrap();
        assert_eq!(
            t,
            Transition {
                rho: 0.1,
                extrapolated: true
            }
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(transition_point(&[]).is_err());
        assert!(transition_point(&[(0.2, 1.0), (0.1, 0.0)]).is_err());
    }
}
