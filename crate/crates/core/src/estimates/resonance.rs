use crate::error::{Error, Result};
use crate::spectral::Sign;

/// `(ξ₁ + ξ₂)² - ε₁ξ₁² - ε₂ξ₂²`.
pub fn bilinear_resonance(xi1: i64, xi2: i64, eps1: Sign, eps2: Sign) -> i64 {
    let s = xi1 + xi2;
    s * s - eps1.int() * xi1 * xi1 - eps2.int() * xi2 * xi2
}

/// Which trilinear interaction a quadruple belongs to: `T^{+,-}` inside the
/// nonlinearity (`Pm`) or `T^{+,+}` (`Pp`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadCase {
    Pm,
    Pp,
}

impl QuadCase {
    /// `(ε₁, ε₂)` of the case.
    pub fn signs(self) -> (Sign, Sign) {
        match self {
            QuadCase::Pm => (Sign::Plus, Sign::Minus),
            QuadCase::Pp => (Sign::Plus, Sign::Plus),
        }
    }
}

fn check_hyperplane(xi: [i64; 4]) -> Result<()> {
    if xi.iter().sum::<i64>() != 0 {
        return Err(Error::Domain(format!(
            "frequencies {xi:?} do not sum to zero"
        )));
    }
    Ok(())
}

/// Factored form of `-Σ ε_j ξ_j²` on `ξ₁ + ξ₂ + ξ₃ + ξ₄ = 0` with `ε₄ = -1`
/// and `(ε₁, ε₂)` from `case`.
pub fn quadruple_resonance(xi: [i64; 4], eps3: Sign, case: QuadCase) -> Result<i64> {
    check_hyperplane(xi)?;
    let [x1, x2, x3, x4] = xi;
    Ok(factored(x1, x2, x3, x4, eps3, case))
}

#[inline]
pub(crate) fn factored(x1: i64, x2: i64, x3: i64, x4: i64, eps3: Sign, case: QuadCase) -> i64 {
    match (case, eps3) {
        (QuadCase::Pm, Sign::Plus) => 2 * (x1 + x2) * (x2 + x3),
        (QuadCase::Pm, Sign::Minus) => -2 * (x2 * x3 + x3 * x4 + x4 * x2),
        (QuadCase::Pp, Sign::Plus) => 2 * (x1 * x2 + x3 * (x1 + x2)),
        (QuadCase::Pp, Sign::Minus) => 2 * (x1 + x3) * (x2 + x3),
    }
}

/// `-ε₁ξ₁² - ε₂ξ₂² - ε₃ξ₃² + ξ₄²`, the unfactored sum.
pub fn quadruple_expansion(xi: [i64; 4], eps3: Sign, case: QuadCase) -> Result<i64> {
    check_hyperplane(xi)?;
    let (e1, e2) = case.signs();
    let [x1, x2, x3, x4] = xi;
    Ok(-e1.int() * x1 * x1 - e2.int() * x2 * x2 - eps3.int() * x3 * x3 + x4 * x4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bilinear_examples() {
        assert_eq!(bilinear_resonance(3, 5, Sign::Plus, Sign::Plus), 30);
        assert_eq!(bilinear_resonance(3, 5, Sign::Minus, Sign::Minus), 98);
        for n in [1, 7, 100] {
            assert_eq!(bilinear_resonance(n + 1, -n, Sign::Plus, Sign::Minus), -2 * n);
        }
    }

    #[test]
    fn quadruple_examples() {
        let n = 4;
        let ce = [n + 1, -n, n, -n - 1];
        assert_eq!(quadruple_resonance(ce, Sign::Plus, QuadCase::Pm).unwrap(), 0);
        assert_eq!(quadruple_resonance([1, 1, -1, -1], Sign::Minus, QuadCase::Pp).unwrap(), 0);
        assert!(matches!(
            quadruple_resonance([1, 2, 3, 4], Sign::Plus, QuadCase::Pp),
            Err(Error::Domain(_))
        ));
        assert!(quadruple_expansion([1, 0, 0, 0], Sign::Plus, QuadCase::Pp).is_err());
    }

    #[test]
    fn factored_equals_expanded_exhaustively() {
        let m: i64 = 64;
        for x1 in -m..=m {
            for x2 in -m..=m {
                for x3 in -m..=m {
                    let x4 = -(x1 + x2 + x3);
                    if x4.abs() > m {
                        continue;
                    }
                    for case in [QuadCase::Pm, QuadCase::Pp] {
                        for e3 in Sign::BOTH {
                            let xi = [x1, x2, x3, x4];
                            assert_eq!(
                                quadruple_resonance(xi, e3, case).unwrap(),
                                quadruple_expansion(xi, e3, case).unwrap(),
                                "{xi:?} {e3} {case:?}"
                            );
                        }
                    }
                }
            }
        }
    }
}
