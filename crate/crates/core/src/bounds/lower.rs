//! Rank lower bounds from the rational points over `x` with `y = y0`.

use num_rational::BigRational;

use crate::arith::cyclotomic::sophie_polynomial;
use crate::arith::factor::{factor_over_q, is_squarefree};
use crate::arith::poly::RationalPoly;
use crate::error::{Error, Result};
use crate::field::independence::independence_rank_with;
use crate::field::{delta_class_of_factor, FieldElement, IndependenceOptions, NumberField, SquareClassSet};

#[derive(Clone, Debug)]
pub struct LowerBound {
    pub lower: usize,
    /// Irreducible monic factors of `f - y0^2`, in factorization order.
    pub factors: Vec<RationalPoly>,
    pub classes: SquareClassSet,
    /// Set when the class count exceeded the cap and only a prefix was used.
    pub partial: bool,
}

impl LowerBound {
    pub fn product(&self, field: &NumberField) -> FieldElement {
        field.product(self.classes.representatives())
    }
}

/// Builds the field of `f` (checking irreducibility) and runs [`lower_bound_in_field`].
pub fn lower_bound_from_points(f: &RationalPoly, y0: &BigRational, opts: &IndependenceOptions) -> Result<LowerBound> {
    let field = NumberField::new(f.clone())?;
    lower_bound_in_field(&field, y0, opts)
}

/// Dimension of the span of the delta-classes `(-1)^{deg g} g(theta)` over the
/// irreducible factors `g` of `f - y0^2`.
pub fn lower_bound_in_field(field: &NumberField, y0: &BigRational, opts: &IndependenceOptions) -> Result<LowerBound> {
    let h = field.poly() - &RationalPoly::constant(y0 * y0);
    if h.degree().unwrap_or(0) == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if !is_squarefree(&h) {
        return Err(Error::NotSquarefree);
    }
    let factors: Vec<RationalPoly> = factor_over_q(&h)?.factors.into_iter().map(|(g, _)| g).collect();
    let reps = factors
        .iter()
        .map(|g| delta_class_of_factor(g, y0, field))
        .collect::<Result<Vec<_>>>()?;
    let classes = SquareClassSet::new(reps)?;
    let partial = classes.len() > opts.cap;
    let used = if partial { classes.truncated(opts.cap) } else { classes.clone() };
    let lower = independence_rank_with(field, &used, opts)?;
    Ok(LowerBound { lower, factors, classes, partial })
}

/// The lower bound at `y0 = 1` for the Sophie Germain curve attached to `q`.
pub fn sophie_lower_bound(q: u64, opts: &IndependenceOptions) -> Result<LowerBound> {
    let field = NumberField::new_irreducible(sophie_polynomial(q)?)?;
    lower_bound_in_field(&field, &BigRational::from_integer(1.into()), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::rat;

    #[test]
    fn q7_has_rank_one() {
        let f = RationalPoly::from_i64s(&[1, -2, -1, 1]);
        let lb = lower_bound_from_points(&f, &rat(1), &IndependenceOptions::default()).unwrap();
        assert_eq!(lb.factors.len(), 3);
        assert_eq!(lb.lower, 1);
        assert!(!lb.partial);
    }

    #[test]
    fn q11_example() {
        let lb = sophie_lower_bound(11, &IndependenceOptions::default()).unwrap();
        let shown: Vec<String> = lb.factors.iter().map(|g| g.to_string()).collect();
        assert_eq!(shown.len(), 3);
        assert_eq!(lb.lower, 2);
        let field = NumberField::new_irreducible(sophie_polynomial(11).unwrap()).unwrap();
        assert!(field.is_square(&lb.product(&field)).unwrap().is_square());
    }

    #[test]
    fn rejects_bad_input() {
        let opts = IndependenceOptions::default();
        // f - 1 = x^2 + 1
        let f = RationalPoly::from_i64s(&[2, 0, 1]);
        assert!(lower_bound_from_points(&f, &rat(1), &opts).is_ok());
        // x^2 + 2x + 2 - 1 = (x + 1)^2
        let f = RationalPoly::from_i64s(&[2, 2, 1]);
        assert_eq!(lower_bound_from_points(&f, &rat(1), &opts).unwrap_err(), Error::NotSquarefree);
        let f = RationalPoly::from_i64s(&[-1, 0, 1]);
        assert_eq!(lower_bound_from_points(&f, &rat(1), &opts).unwrap_err(), Error::Reducible);
    }

    #[test]
    fn cap_gives_partial() {
        let opts = IndependenceOptions { cap: 2, ..Default::default() };
        let lb = sophie_lower_bound(11, &opts).unwrap();
        assert!(lb.partial);
        assert_eq!(lb.classes.len(), 3);
        assert!(lb.lower <= 2);
    }
}
