//! Hodge diamond and Betti vector bookkeeping for blow-ups and
//! projectivized bundles.

use thiserror::Error;

use crate::cohomology::CohomologyReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiamondError {
    #[error("center of dimension {center} cannot have codimension {codim} in a {ambient}-fold")]
    DimensionMismatch {
        ambient: usize,
        center: usize,
        codim: usize,
    },
    #[error("bundle rank must be at least 1")]
    InvalidRank,
    #[error("diamond has size {found}, expected {expected}")]
    BadShape { expected: usize, found: usize },
}

/// h^{p,q} for 0 ≤ p, q ≤ n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeDiamond {
    n: usize,
    h: Vec<Vec<u64>>,
}

impl HodgeDiamond {
    pub fn new(n: usize, h: Vec<Vec<u64>>) -> Result<HodgeDiamond, DiamondError> {
        if h.len() != n + 1 {
            return Err(DiamondError::BadShape {
                expected: n + 1,
                found: h.len(),
            });
        }
        if let Some(row) = h.iter().find(|row| row.len() != n + 1) {
            return Err(DiamondError::BadShape {
                expected: n + 1,
                found: row.len(),
            });
        }
        Ok(HodgeDiamond { n, h })
    }

    pub fn zero(n: usize) -> HodgeDiamond {
        HodgeDiamond {
            n,
            h: vec![vec![0; n + 1]; n + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.h
    }

    /// h^{p,q}, zero outside [0,n]².
    pub fn get(&self, p: isize, q: isize) -> u64 {
        if p < 0 || q < 0 || p as usize > self.n || q as usize > self.n {
            0
        } else {
            self.h[p as usize][q as usize]
        }
    }

    pub fn total(&self) -> u64 {
        self.h.iter().flatten().sum()
    }

    /// Σ_{p+q=k} h^{p,q} for k = 0..2n.
    pub fn degree_sums(&self) -> Vec<u64> {
        let mut sums = vec![0; 2 * self.n + 1];
        for (p, row) in self.h.iter().enumerate() {
            for (q, v) in row.iter().enumerate() {
                sums[p + q] += v;
            }
        }
        sums
    }
}

/// b_0..b_{2n}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiVector {
    n: usize,
    b: Vec<u64>,
}

impl BettiVector {
    pub fn new(n: usize, b: Vec<u64>) -> Result<BettiVector, DiamondError> {
        if b.len() != 2 * n + 1 {
            return Err(DiamondError::BadShape {
                expected: 2 * n + 1,
                found: b.len(),
            });
        }
        Ok(BettiVector { n, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[u64] {
        &self.b
    }

    pub fn get(&self, k: isize) -> u64 {
        if k < 0 {
            0
        } else {
            self.b.get(k as usize).copied().unwrap_or(0)
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.b
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// A connected model has b₀ ≥ 1; this is advisory only.
    pub fn looks_connected(&self) -> bool {
        self.b.first().is_some_and(|&b| b >= 1)
    }
}

/// A Hodge diamond together with Betti numbers of the same dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeNumbers {
    pub diamond: HodgeDiamond,
    pub betti: BettiVector,
}

impl HodgeNumbers {
    pub fn new(diamond: HodgeDiamond, betti: BettiVector) -> Result<HodgeNumbers, DiamondError> {
        if diamond.n != betti.n {
            return Err(DiamondError::BadShape {
                expected: 2 * diamond.n + 1,
                found: betti.b.len(),
            });
        }
        Ok(HodgeNumbers { diamond, betti })
    }

    pub fn n(&self) -> usize {
        self.diamond.n
    }

    /// A point: h^{0,0} = b_0 = 1.
    pub fn point() -> HodgeNumbers {
        HodgeNumbers {
            diamond: HodgeDiamond {
                n: 0,
                h: vec![vec![1]],
            },
            betti: BettiVector { n: 0, b: vec![1] },
        }
    }

    /// Dolbeault dimensions and Betti numbers exported from a report.
    pub fn from_report(report: &CohomologyReport) -> HodgeNumbers {
        let to_u64 = |row: &Vec<usize>| row.iter().map(|&x| x as u64).collect();
        HodgeNumbers {
            diamond: HodgeDiamond {
                n: report.n,
                h: report.hodge.iter().map(to_u64).collect(),
            },
            betti: BettiVector {
                n: report.n,
                b: report.betti.iter().map(|&x| x as u64).collect(),
            },
        }
    }
}

/// Numbers of the blow-up of X along a center Z of codimension k:
/// h^{p,q}(X̃) = h^{p,q}(X) + Σ_{j=1}^{k−1} h^{p−j,q−j}(Z), and likewise
/// b_m(X̃) = b_m(X) + Σ_{j=1}^{k−1} b_{m−2j}(Z).
pub fn blowup_diamond(
    x: &HodgeNumbers,
    z: &HodgeNumbers,
    codim: usize,
) -> Result<HodgeNumbers, DiamondError> {
    let n = x.n();
    if codim < 1 || codim > n || z.n() + codim != n {
        return Err(DiamondError::DimensionMismatch {
            ambient: n,
            center: z.n(),
            codim,
        });
    }
    let h = (0..=n as isize)
        .map(|p| {
            (0..=n as isize)
                .map(|q| {
                    x.diamond.get(p, q)
                        + (1..codim as isize)
                            .map(|j| z.diamond.get(p - j, q - j))
                            .sum::<u64>()
                })
                .collect()
        })
        .collect();
    let b = (0..=2 * n as isize)
        .map(|m| {
            x.betti.get(m)
                + (1..codim as isize)
                    .map(|j| z.betti.get(m - 2 * j))
                    .sum::<u64>()
        })
        .collect();
    Ok(HodgeNumbers {
        diamond: HodgeDiamond { n, h },
        betti: BettiVector { n, b },
    })
}

/// Numbers of ℙ(E) for a rank-r bundle E over X:
/// h^{p,q}(ℙ(E)) = Σ_{j=0}^{r−1} h^{p−j,q−j}(X), of dimension n + r − 1.
pub fn projectivize(x: &HodgeNumbers, rank: usize) -> Result<HodgeNumbers, DiamondError> {
    if rank == 0 {
        return Err(DiamondError::InvalidRank);
    }
    let n = x.n() + rank - 1;
    let h = (0..=n as isize)
        .map(|p| {
            (0..=n as isize)
                .map(|q| {
                    (0..rank as isize)
                        .map(|j| x.diamond.get(p - j, q - j))
                        .sum()
                })
                .collect()
        })
        .collect();
    let b = (0..=2 * n as isize)
        .map(|m| (0..rank as isize).map(|j| x.betti.get(m - 2 * j)).sum())
        .collect();
    Ok(HodgeNumbers {
        diamond: HodgeDiamond { n, h },
        betti: BettiVector { n, b },
    })
}

/// Numeric shadow of a Hodge structure on de Rham cohomology:
/// h^{p,q} = h^{q,p} and b_k = Σ_{p+q=k} h^{p,q}.
pub fn check_hodge_structure(diamond: &HodgeDiamond, betti: &BettiVector) -> bool {
    if diamond.n != betti.n {
        return false;
    }
    let n = diamond.n;
    let symmetric = (0..=n).all(|p| (0..=n).all(|q| diamond.h[p][q] == diamond.h[q][p]));
    symmetric && diamond.degree_sums() == betti.b
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn numbers(n: usize, h: Vec<Vec<u64>>) -> HodgeNumbers {
        let diamond = HodgeDiamond::new(n, h).unwrap();
        let betti = BettiVector::new(n, diamond.degree_sums()).unwrap();
        HodgeNumbers { diamond, betti }
    }

    fn torus(n: usize) -> HodgeNumbers {
        let binom = |k: usize| (1..=k).fold(1u64, |acc, i| acc * (n - i + 1) as u64 / i as u64);
        numbers(
            n,
            (0..=n)
                .map(|p| (0..=n).map(|q| binom(p) * binom(q)).collect())
                .collect(),
        )
    }

    #[test]
    fn codim_one_is_identity() {
        let x = torus(3);
        let z = torus(2);
        assert_eq!(blowup_diamond(&x, &z, 1).unwrap(), x);
    }

    #[test]
    fn point_blowup_adds_diagonal() {
        let x = torus(3);
        let y = blowup_diamond(&x, &HodgeNumbers::point(), 3).unwrap();
        for p in 0..=3isize {
            for q in 0..=3isize {
                let bump = u64::from(p == q && (1..=2).contains(&p));
                assert_eq!(y.diamond.get(p, q), x.diamond.get(p, q) + bump);
            }
        }
        assert_eq!(y.betti.values()[2], x.betti.values()[2] + 1);
        assert_eq!(y.betti.values()[4], x.betti.values()[4] + 1);
    }

    #[test]
    fn dimension_mismatch() {
        let x = torus(3);
        assert_eq!(
            blowup_diamond(&x, &x, 1),
            Err(DiamondError::DimensionMismatch {
                ambient: 3,
                center: 3,
                codim: 1
            })
        );
        assert!(blowup_diamond(&x, &HodgeNumbers::point(), 2).is_err());
        assert!(blowup_diamond(&x, &torus(3), 0).is_err());
    }

    #[test]
    fn projective_space_from_point() {
        let p3 = projectivize(&HodgeNumbers::point(), 4).unwrap();
        assert_eq!(p3.n(), 3);
        for p in 0..=3isize {
            for q in 0..=3isize {
                assert_eq!(p3.diamond.get(p, q), u64::from(p == q));
            }
        }
        assert_eq!(p3.betti.values(), &[1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(projectivize(&torus(2), 1).unwrap(), torus(2));
        assert_eq!(projectivize(&torus(2), 0), Err(DiamondError::InvalidRank));
    }

    #[test]
    fn hodge_structure_check() {
        assert!(check_hodge_structure(&torus(3).diamond, &torus(3).betti));
        // b₁ = 4 against h^{1,0} + h^{0,1} = 5
        let iw = HodgeDiamond::new(
            3,
            vec![
                vec![1, 2, 2, 1],
                vec![3, 6, 6, 3],
                vec![3, 6, 6, 3],
                vec![1, 2, 2, 1],
            ],
        )
        .unwrap();
        let b = BettiVector::new(3, vec![1, 4, 8, 10, 8, 4, 1]).unwrap();
        assert!(!check_hodge_structure(&iw, &b));
        let asym = HodgeDiamond::new(1, vec![vec![1, 2], vec![1, 1]]).unwrap();
        let b = BettiVector::new(1, asym.degree_sums()).unwrap();
        assert!(!check_hodge_structure(&asym, &b));
    }

    /// Symmetric diamonds with matching Betti numbers.
    fn hodge_numbers(max_n: usize) -> impl Strategy<Value = HodgeNumbers> {
        (0..=max_n).prop_flat_map(|n| {
            prop::collection::vec(0u64..6, (n + 1) * (n + 1)).prop_map(move |raw| {
                let mut h = vec![vec![0; n + 1]; n + 1];
                for p in 0..=n {
                    for q in p..=n {
                        h[p][q] = raw[p * (n + 1) + q];
                        h[q][p] = h[p][q];
                    }
                }
                numbers(n, h)
            })
        })
    }

    /// Arbitrary, possibly asymmetric diamond with arbitrary Betti numbers.
    fn raw_numbers(n: usize) -> impl Strategy<Value = HodgeNumbers> {
        (
            prop::collection::vec(0u64..6, (n + 1) * (n + 1)),
            prop::collection::vec(0u64..9, 2 * n + 1),
        )
            .prop_map(move |(raw, b)| HodgeNumbers {
                diamond: HodgeDiamond::new(n, raw.chunks(n + 1).map(<[u64]>::to_vec).collect())
                    .unwrap(),
                betti: BettiVector::new(n, b).unwrap(),
            })
    }

    proptest! {
        #[test]
        fn euler_characteristic_of_blowup(x in raw_numbers(4), z in raw_numbers(1)) {
            let k = 3;
            let y = blowup_diamond(&x, &z, k).unwrap();
            // alternating sum computed directly from the shifted copies
            let shifted: i64 = (1..k)
                .map(|j| {
                    z.betti.values().iter().enumerate()
                        .map(|(m, &b)| if (m + 2 * j) % 2 == 0 { b as i64 } else { -(b as i64) })
                        .sum::<i64>()
                })
                .sum();
            prop_assert_eq!(y.betti.euler_characteristic(), x.betti.euler_characteristic() + shifted);
            prop_assert_eq!(
                y.betti.euler_characteristic(),
                x.betti.euler_characteristic() + (k as i64 - 1) * z.betti.euler_characteristic()
            );
        }

        #[test]
        fn operations_preserve_hodge_structure(x in hodge_numbers(4), z in hodge_numbers(3), r in 1usize..=4) {
            prop_assume!(z.n() < x.n());
            let k = x.n() - z.n();
            let y = blowup_diamond(&x, &z, k).unwrap();
            prop_assert!(check_hodge_structure(&y.diamond, &y.betti));
            let pe = projectivize(&x, r).unwrap();
            prop_assert!(check_hodge_structure(&pe.diamond, &pe.betti));
            prop_assert_eq!(pe.diamond.total(), r as u64 * x.diamond.total());
        }

        #[test]
        fn operations_are_additive(a in raw_numbers(3), b in raw_numbers(3), za in raw_numbers(1), zb in raw_numbers(1)) {
            let sum = |u: &HodgeNumbers, v: &HodgeNumbers| HodgeNumbers {
                diamond: HodgeDiamond::new(
                    u.n(),
                    u.diamond.rows().iter().zip(v.diamond.rows())
                        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
                        .collect(),
                ).unwrap(),
                betti: BettiVector::new(
                    u.n(),
                    u.betti.values().iter().zip(v.betti.values()).map(|(x, y)| x + y).collect(),
                ).unwrap(),
            };
            let lhs = blowup_diamond(&sum(&a, &b), &sum(&za, &zb), 2).unwrap();
            let rhs = sum(&blowup_diamond(&a, &za, 2).unwrap(), &blowup_diamond(&b, &zb, 2).unwrap());
            prop_assert_eq!(lhs, rhs);
            let lhs = projectivize(&sum(&a, &b), 3).unwrap();
            let rhs = sum(&projectivize(&a, 3).unwrap(), &projectivize(&b, 3).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
