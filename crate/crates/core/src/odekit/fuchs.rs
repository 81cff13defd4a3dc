//! Fuchs valuation criterion for companion-form connections.

use crate::odekit::Laurent;

/// ∇_∂z v_{d−1} = Σ aᵢ vᵢ in a cyclic basis v₀, …, v_{d−1}.
#[derive(Clone, Debug, PartialEq)]
pub struct FuchsProblem {
    pub a_coeffs: Vec<Laurent>,
    pub d: usize,
    /// Coordinates of the cyclic vector in the original frame.
    pub cyclic_vector: Vec<Laurent>,
}

impl FuchsProblem {
    /// Valuations v(aᵢ); `None` stands for +∞.
    pub fn valuations(&self) -> Vec<Option<i64>> {
        self.a_coeffs.iter().map(Laurent::valuation).collect()
    }
}

/// Regular singular iff v(aᵢ) ≥ i − d for every i.
pub fn fuchs_regular_singular(p: &FuchsProblem) -> bool {
    p.valuations()
        .iter()
        .enumerate()
        .all(|(i, v)| v.is_none_or(|v| v >= i as i64 - p.d as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::TSeries;

    fn with_vals(vals: &[i64]) -> FuchsProblem {
        let a = vals.iter().map(|&v| Laurent::new(v, TSeries::one(4))).collect::<Vec<_>>();
        FuchsProblem { d: a.len(), a_coeffs: a, cyclic_vector: vec![] }
    }

    #[test]
    fn valuation_examples() {
        assert!(fuchs_regular_singular(&with_vals(&[-1])));
        assert!(fuchs_regular_singular(&with_vals(&[-2, -1])));
        assert!(!fuchs_regular_singular(&with_vals(&[-3, -1])));
        assert!(!fuchs_regular_singular(&with_vals(&[-2, -2])));
    }
}
