//! EMA bookkeeping and variance-based variable ranking.
//!
//! Each variable carries an exponential moving average of its assigned
//! values (True = 1, False = 0). The plug-in variance `ema * (1 - ema)`
//! measures how volatile the variable has been across iterations; ranking
//! high-to-low assigns the most volatile variables first and leaves the
//! stable ones to unit propagation.

use crate::cnf::Assignment;

/// Per-variable exponential moving average of assignment values.
#[derive(Debug, Clone, PartialEq)]
pub struct EmaState {
    values: Vec<f64>,
    rho: f64,
}

impl EmaState {
    /// Initializes the EMA directly from an assignment (entries 0 or 1).
    pub fn from_assignment(assignment: &Assignment, rho: f64) -> EmaState {
        assert!((0.0..=1.0).contains(&rho), "rho must be in [0, 1]");
        EmaState {
            values: assignment
                .values()
                .iter()
                .map(|&v| if v { 1.0 } else { 0.0 })
                .collect(),
            rho,
        }
    }

    pub fn new(values: Vec<f64>, rho: f64) -> EmaState {
        assert!((0.0..=1.0).contains(&rho), "rho must be in [0, 1]");
        assert!(
            values.iter().all(|v| (0.0..=1.0).contains(v)),
            "ema entries must be in [0, 1]"
        );
        EmaState { values, rho }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Elementwise `ema ← ema·ρ + α·(1−ρ)` with True = 1, False = 0.
    pub fn update(&mut self, assignment: &Assignment) {
        assert_eq!(
            assignment.len(),
            self.values.len(),
            "assignment length must equal ema length"
        );
        for (ema, &v) in self.values.iter_mut().zip(assignment.values()) {
            let x = if v { 1.0 } else { 0.0 };
            *ema = *ema * self.rho + x * (1.0 - self.rho);
        }
    }

    /// `ema · (1 − ema)` for one variable (0-based index).
    #[inline]
    pub fn variance(&self, idx: usize) -> f64 {
        self.values[idx] * (1.0 - self.values[idx])
    }
}

/// Ranks variables (0-based indices) by variance, high to low, ties broken
/// by ascending variable index. With `low_to_high` the variance comparison
/// is reversed; the tie rule is unchanged.
pub fn variance_ranking(state: &EmaState, low_to_high: bool) -> Vec<usize> {
    let mut order: Vec<usize> = (0..state.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        let (va, vb) = (state.variance(a), state.variance(b));
        let cmp = if low_to_high {
            va.total_cmp(&vb)
        } else {
            vb.total_cmp(&va)
        };
        cmp.then(a.cmp(&b))
    });
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ema(values: &[f64], rho: f64) -> EmaState {
        EmaState::new(values.to_vec(), rho)
    }

    #[test]
    fn update_fixed_point_at_one() {
        for rho in [0.0, 0.5, 0.9, 1.0] {
            let mut state = ema(&[1.0], rho);
            state.update(&Assignment::new(vec![true]));
            assert!((state.values()[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn update_decays_toward_zero() {
        let mut state = ema(&[1.0], 0.9);
        state.update(&Assignment::new(vec![false]));
        assert!((state.values()[0] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn update_moves_toward_one() {
        let mut state = ema(&[0.5], 0.9);
        state.update(&Assignment::new(vec![true]));
        assert!((state.values()[0] - 0.55).abs() < 1e-12);
    }

    #[test]
    fn ranking_high_to_low_with_tie() {
        // variances [0.25, 0.09, 0.09]: x2 before x3 by index tie-break.
        let state = ema(&[0.5, 0.1, 0.9], 0.9);
        assert_eq!(variance_ranking(&state, false), vec![0, 1, 2]);
    }

    #[test]
    fn ranking_total_tie_is_index_order() {
        let state = ema(&[0.3; 5], 0.9);
        assert_eq!(variance_ranking(&state, false), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn ranking_first_iteration_all_zero_variance() {
        // ema initialized to a 0/1 assignment: every variance is 0.
        let a = Assignment::new(vec![true, false, true, true]);
        let state = EmaState::from_assignment(&a, 0.9);
        assert!(state.values().iter().all(|&v| v == 0.0 || v == 1.0));
        assert_eq!(variance_ranking(&state, false), vec![0, 1, 2, 3]);
    }

    #[test]
    fn reversed_comparator_reverses_distinct_variances() {
        let state = ema(&[0.5, 0.4, 0.3, 0.15, 0.05], 0.9);
        let high = variance_ranking(&state, false);
        let mut low = variance_ranking(&state, true);
        low.reverse();
        assert_eq!(high, low);
    }

    proptest! {
        #[test]
        fn ema_stays_in_unit_interval(
            init in proptest::collection::vec(0.0f64..=1.0, 1..20),
            updates in proptest::collection::vec(
                proptest::collection::vec(proptest::bool::ANY, 1..20), 0..50),
            rho in 0.0f64..=1.0,
        ) {
            let n = init.len();
            let mut state = EmaState::new(init, rho);
            for update in updates {
                let mut a = update;
                a.resize(n, false);
                state.update(&Assignment::new(a));
                for (i, v) in state.values().iter().enumerate() {
                    prop_assert!((0.0..=1.0).contains(v));
                    let var = state.variance(i);
                    prop_assert!((0.0..=0.25).contains(&var));
                }
            }
        }

        #[test]
        fn ranking_is_permutation_and_sorted(
            values in proptest::collection::vec(0.0f64..=1.0, 1..30),
            low_to_high in proptest::bool::ANY,
        ) {
            let state = EmaState::new(values, 0.9);
            let order = variance_ranking(&state, low_to_high);
            let mut seen = vec![false; state.len()];
            for &i in &order {
                prop_assert!(!seen[i]);
                seen[i] = true;
            }
            for w in order.windows(2) {
                let (va, vb) = (state.variance(w[0]), state.variance(w[1]));
                if low_to_high {
                    prop_assert!(va < vb || (va == vb && w[0] < w[1]));
                } else {
                    prop_assert!(va > vb || (va == vb && w[0] < w[1]));
                }
            }
        }
    }
}
