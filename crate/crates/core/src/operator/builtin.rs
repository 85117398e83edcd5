use crate::error::{Error, Result};
use crate::numkernel::Rational;
use crate::operator::data::*;
use crate::operator::{BoundaryClosure, CentralStencil, DualPairOperator, InteriorStencil};

// (leftmost offset, coefficients), upwind forward table
#[rustfmt::skip]
const UPWIND: [(i64, &[(i64, i64)]); 8] = [
    (0,  &[(-3, 2), (2, 1), (-1, 2)]),
    (-1, &[(-1, 3), (-1, 2), (1, 1), (-1, 6)]),
    (-1, &[(-1, 4), (-5, 6), (3, 2), (-1, 2), (1, 12)]),
    (-2, &[(1, 20), (-1, 2), (-1, 3), (1, 1), (-1, 4), (1, 30)]),
    (-2, &[(1, 30), (-2, 5), (-7, 12), (4, 3), (-1, 2), (2, 15), (-1, 60)]),
    (-3, &[(-1, 105), (1, 10), (-3, 5), (-1, 4), (1, 1), (-3, 10), (1, 15), (-1, 140)]),
    (-3, &[(-1, 168), (1, 14), (-1, 2), (-9, 20), (5, 4), (-1, 2), (1, 6), (-1, 28), (1, 280)]),
    (-4, &[(1, 504), (-1, 42), (1, 7), (-2, 3), (-1, 5), (1, 1), (-1, 3), (2, 21), (-1, 56), (1, 630)]),
];

// tabulated values that fail consistency: (order, index into the row, tabulated value)
const UPWIND_TABULATED: [(usize, usize, (i64, i64)); 2] = [(8, 7, (1, 28)), (9, 7, (20, 21))];

#[rustfmt::skip]
const DRP: [(i64, &[(i64, i64)]); 4] = [
    (-2, &[(-5, 48), (29, 360), (-401, 360), (7, 5), (-187, 720), (-1, 360)]),
    (-3, &[(13, 525), (-109, 1050), (-17, 175), (-127, 140), (31, 21), (-167, 350), (47, 525), (-11, 2100)]),
    (-4, &[(-1, 168), (149, 3150), (-199, 1575), (-8, 75), (-8, 9), (67, 45), (-37, 75), (124, 1575), (139, 12600), (-1, 210)]),
    (-4, &[(-43, 7056), (4859, 117600), (-107, 1225), (-841, 4200), (-1111, 1400), (119, 80), (-617, 1050), (5113, 29400), (-587, 19600), (737, 352800)]),
];

/// Upwind forward interior of the given order (2..=9), with the order-8
/// and order-9 rows corrected so that Σα = 0, Σlα = 1.
pub fn build_upwind_interior(order: usize) -> Result<InteriorStencil> {
    upwind_interior(order, false)
}

/// As [`build_upwind_interior`]; `verbatim` reproduces the tabulated rows
/// entries, including the two that break consistency.
pub fn upwind_interior(order: usize, verbatim: bool) -> Result<InteriorStencil> {
    if !(2..=9).contains(&order) {
        return Err(Error::UnsupportedOrder { kind: "upwind interior", order });
    }
    let (first, row) = UPWIND[order - 2];
    let mut row = row.to_vec();
    if verbatim {
        for (o, idx, v) in UPWIND_TABULATED {
            if o == order {
                row[idx] = v;
            }
        }
    }
    InteriorStencil::from_fracs(first, &row, order)
}

/// DRP interior of the given order (4..=7), as tabulated.
pub fn build_drp_interior(order: usize) -> Result<InteriorStencil> {
    if !(4..=7).contains(&order) {
        return Err(Error::UnsupportedOrder { kind: "DRP interior", order });
    }
    let (first, row) = DRP[order - 4];
    InteriorStencil::from_fracs(first, row, order)
}

/// Classical central difference of even order, solved exactly from the
/// odd-moment conditions Σ_j 2 j^m γ_j = δ_{m1}, m = 1, 3, …, order − 1.
pub fn build_central_interior(order: usize) -> Result<CentralStencil> {
    if order < 2 || order % 2 == 1 {
        return Err(Error::UnsupportedOrder { kind: "central interior (even orders only)", order });
    }
    let r = order / 2;
    let mut a: Vec<Vec<Rational>> = (0..r)
        .map(|row| {
            let m = 2 * row as u32 + 1;
            let mut v: Vec<Rational> =
                (1..=r).map(|j| Rational::from_int(2) * Rational::from_int(j as i64).pow(m)).collect();
            v.push(if row == 0 { Rational::one() } else { Rational::zero() });
            v
        })
        .collect();
    // exact Gauss-Jordan; the Vandermonde-like system is nonsingular
    for k in 0..r {
        let p = (k..r).find(|&i| !a[i][k].is_zero()).expect("nonsingular Vandermonde system");
        a.swap(k, p);
        let piv = a[k][k].clone();
        for v in a[k].iter_mut() {
            *v = &*v / &piv;
        }
        for i in 0..r {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in k..=r {
                    let t = &f * &a[k][j];
                    a[i][j] -= &t;
                }
            }
        }
    }
    let gamma = a.into_iter().map(|row| row[r].clone()).collect();
    Ok(CentralStencil { gamma, declared_order: order })
}

fn parse_closure<const S: usize>(q: &[[&str; S]; S], h: &[&str; S]) -> BoundaryClosure {
    let q = q
        .iter()
        .map(|row| row.iter().map(|s| Rational::parse(s).expect("closure literal")).collect())
        .collect();
    let h = h.iter().map(|s| Rational::parse(s).expect("closure literal")).collect();
    BoundaryClosure { s: S, q, h }
}

/// Shipped closure (block Q̄₊ entries and weights) for DRP order 4..=7.
pub fn drp_closure(order: usize) -> Result<BoundaryClosure> {
    Ok(match order {
        4 => parse_closure(&DRP4_Q, &DRP4_H),
        5 => parse_closure(&DRP5_Q, &DRP5_H),
        6 => parse_closure(&DRP6_Q, &DRP6_H),
        7 => parse_closure(&DRP7_Q, &DRP7_H),
        _ => return Err(Error::UnsupportedOrder { kind: "DRP closure", order }),
    })
}

/// Full shipped operator `drp{order}`.
pub fn drp_operator(order: usize) -> Result<DualPairOperator> {
    DualPairOperator::new(format!("drp{order}"), build_drp_interior(order)?, Some(drp_closure(order)?))
}

/// Second-order classical SBP operator (H = diag(1/2, 1, …, 1, 1/2)).
pub fn central2_operator() -> DualPairOperator {
    let interior = build_central_interior(2).expect("order 2").to_interior();
    // Q₊ row 0 is (−1/2, 1/2), so Q̄₊ = Q₊ − B/2 has a zero corner
    let closure = BoundaryClosure { s: 1, q: vec![vec![Rational::zero()]], h: vec![Rational::new(1, 2)] };
    DualPairOperator::new("central2".into(), interior, Some(closure)).expect("valid operator")
}

pub const BUILTIN_NAMES: [&str; 16] = [
    "drp4", "drp5", "drp6", "drp7", "up2", "up3", "up4", "up5", "up6", "up7", "up8", "up9", "central2",
    "central4", "central6", "central8",
];

/// Resolve a builtin name. `drp*` and `central2` carry closures; the
/// remaining upwind and central entries are interior-only.
pub fn builtin(name: &str) -> Result<DualPairOperator> {
    let parse = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    if let Some(o) = parse("drp") {
        return drp_operator(o).map_err(|_| Error::UnknownOperator(name.into()));
    }
    if let Some(o) = parse("up") {
        let st = build_upwind_interior(o).map_err(|_| Error::UnknownOperator(name.into()))?;
        return DualPairOperator::new(name.into(), st, None);
    }
    if let Some(o) = parse("central") {
        if o == 2 {
            return Ok(central2_operator());
        }
        let st = build_central_interior(o).map_err(|_| Error::UnknownOperator(name.into()))?;
        if o > 8 {
            return Err(Error::UnknownOperator(name.into()));
        }
        return DualPairOperator::new(name.into(), st.to_interior(), None);
    }
    Err(Error::UnknownOperator(name.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upwind_examples() {
        let s = build_upwind_interior(4).unwrap();
        assert_eq!(s.offsets().collect::<Vec<_>>(), vec![-1, 0, 1, 2, 3]);
        assert_eq!(s.coeffs[0], Rational::new(-1, 4));
        let s2 = build_upwind_interior(2).unwrap();
        assert_eq!((s2.r1, s2.r2), (0, 2));
        assert!(build_upwind_interior(10).is_err());
        assert!(build_upwind_interior(1).is_err());
    }

    #[test]
    fn upwind_orders_exact() {
        for o in 2..=9 {
            let s = build_upwind_interior(o).unwrap();
            assert!(s.is_consistent(), "order {o}");
            assert_eq!(s.exact_order(), o, "order {o}");
        }
    }

    #[test]
    fn tabulated_rows_are_inconsistent() {
        assert!(!upwind_interior(8, true).unwrap().is_consistent());
        let nine = upwind_interior(9, true).unwrap();
        assert!(!nine.is_consistent());
        assert_eq!(nine.coeff(3), Rational::new(20, 21));
        assert_eq!(build_upwind_interior(9).unwrap().coeff(3), Rational::new(2, 21));
    }

    #[test]
    fn drp_examples() {
        let d4 = build_drp_interior(4).unwrap();
        assert_eq!(d4.offsets().next(), Some(-2));
        assert_eq!(d4.coeff(0), Rational::new(-401, 360));
        assert!(d4.is_consistent());
        assert_eq!(d4.minus().coeff(2), Rational::new(5, 48));
        let d6 = build_drp_interior(6).unwrap();
        assert_eq!((d6.r1, d6.r2), (4, 5));
        assert_eq!(d6.coeffs[0], Rational::new(-1, 168));
        assert!(build_drp_interior(3).is_err());
    }

    #[test]
    fn drp_exact_orders() {
        // drp4 as tabulated is only third-order accurate
        let got: Vec<usize> = (4..=7).map(|o| build_drp_interior(o).unwrap().exact_order()).collect();
        assert_eq!(got, vec![3, 5, 6, 7]);
    }

    #[test]
    fn central_coefficients() {
        assert_eq!(build_central_interior(2).unwrap().gamma, vec![Rational::new(1, 2)]);
        assert_eq!(build_central_interior(4).unwrap().gamma, vec![Rational::new(2, 3), Rational::new(-1, 12)]);
        let c8 = build_central_interior(8).unwrap();
        assert_eq!(c8.gamma[3], Rational::new(-1, 280));
        for o in [2, 4, 6, 8] {
            let c = build_central_interior(o).unwrap();
            assert!(c.is_consistent());
            assert_eq!(c.to_interior().exact_order(), o);
        }
        assert!(build_central_interior(3).is_err());
    }

    #[test]
    fn names_resolve() {
        for n in BUILTIN_NAMES {
            let op = builtin(n).unwrap();
            assert_eq!(op.name, n);
        }
        assert!(builtin("drp9").is_err());
        assert!(builtin("central10").is_err());
        assert!(builtin("foo").is_err());
    }
}
