//! Dense two-phase simplex with Bland's rule.
//!
//! Over an exact field (the default [`crate::Rational`]) the answers are exact;
//! over floats this is the textbook algorithm with no tolerance handling.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub sense: Sense,
    pub rhs: T,
}

/// `maximize objective·x` subject to the constraints and `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram<T> {
    vars: usize,
    objective: Vec<T>,
    constraints: Vec<Constraint<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(vars: usize) -> Self {
        LinearProgram {
            vars,
            objective: vec![T::zero(); vars],
            constraints: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn maximize(&mut self, objective: Vec<T>) -> &mut Self {
        assert_eq!(objective.len(), self.vars);
        self.objective = objective;
        self
    }

    pub fn constrain(&mut self, coeffs: Vec<T>, sense: Sense, rhs: T) -> &mut Self {
        assert_eq!(coeffs.len(), self.vars);
        self.constraints.push(Constraint { coeffs, sense, rhs });
        self
    }

    pub fn solve(&self) -> LpOutcome<T> {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    structural: usize,
    /// First artificial column; artificials occupy the tail.
    artificial_start: usize,
    cols: usize,
}

enum Pivoting {
    Optimal,
    Unbounded,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Self {
        let n = lp.vars;
        // Normalize to nonnegative right-hand sides.
        let normalized: Vec<(Vec<T>, Sense, T)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let flipped = match c.sense {
                        Sense::Le => Sense::Ge,
                        Sense::Ge => Sense::Le,
                        Sense::Eq => Sense::Eq,
                    };
                    (
                        c.coeffs.iter().map(|a| -a.clone()).collect(),
                        flipped,
                        -c.rhs.clone(),
                    )
                } else {
                    (c.coeffs.clone(), c.sense, c.rhs.clone())
                }
            })
            .collect();
        let slacks = normalized.iter().filter(|c| c.1 != Sense::Eq).count();
        let artificials = normalized.iter().filter(|c| c.1 != Sense::Le).count();
        let artificial_start = n + slacks;
        let cols = artificial_start + artificials;
        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut next_slack, mut next_art) = (n, artificial_start);
        for (coeffs, sense, rhs) in normalized {
            let mut row = coeffs;
            row.resize(cols + 1, T::zero());
            match sense {
                Sense::Le => {
                    row[next_slack] = T::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Sense::Ge => {
                    row[next_slack] = -T::one();
                    next_slack += 1;
                    row[next_art] = T::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Sense::Eq => {
                    row[next_art] = T::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            row[cols] = rhs;
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            structural: n,
            artificial_start,
            cols,
        }
    }

    fn run(mut self, objective: &[T]) -> LpOutcome<T> {
        if self.artificial_start < self.cols {
            let mut phase1 = vec![T::zero(); self.cols];
            for c in phase1.iter_mut().skip(self.artificial_start) {
                *c = -T::one();
            }
            let mut reduced = self.reduced_costs(&phase1);
            // Phase one is bounded by construction.
            let _ = self.pivot_until_optimal(&mut reduced, self.cols);
            if reduced[self.cols].abs().is_above_tolerance() {
                // Objective row stores minus the objective value; a nonzero
                // remainder means some artificial is still positive.
                return LpOutcome::Infeasible;
            }
            self.drive_out_artificials();
        }
        let mut costs = objective.to_vec();
        costs.resize(self.cols, T::zero());
        let mut reduced = self.reduced_costs(&costs);
        match self.pivot_until_optimal(&mut reduced, self.artificial_start) {
            Pivoting::Unbounded => LpOutcome::Unbounded,
            Pivoting::Optimal => {
                let mut x = vec![T::zero(); self.structural];
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if b < self.structural {
                        x[b] = row[self.cols].clone();
                    }
                }
                let value = -reduced[self.cols].clone();
                LpOutcome::Optimal { x, value }
            }
        }
    }

    /// Reduced-cost row for `costs`, with minus the current objective value in
    /// the last slot.
    fn reduced_costs(&self, costs: &[T]) -> Vec<T> {
        let mut red: Vec<T> = costs.to_vec();
        red.push(T::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = costs[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (r, a) in red.iter_mut().zip(row) {
                *r = r.clone() - cb.clone() * a.clone();
            }
        }
        red
    }

    /// Bland's rule; only columns below `allowed` may enter.
    fn pivot_until_optimal(&mut self, reduced: &mut [T], allowed: usize) -> Pivoting {
        loop {
            let Some(enter) = (0..allowed).find(|&j| reduced[j].is_above_tolerance()) else {
                return Pivoting::Optimal;
            };
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[enter];
                if !a.is_above_tolerance() {
                    continue;
                }
                let ratio = row[self.cols].clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((leave, _)) = leave else {
                return Pivoting::Unbounded;
            };
            self.pivot(leave, enter, reduced);
        }
    }

    fn pivot(&mut self, pr: usize, pc: usize, reduced: &mut [T]) {
        let p = self.rows[pr][pc].clone();
        for v in self.rows[pr].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.rows[pr].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == pr {
                continue;
            }
            let f = row[pc].clone();
            if f.is_zero() {
                continue;
            }
            for (v, a) in row.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * a.clone();
            }
        }
        let f = reduced[pc].clone();
        if !f.is_zero() {
            for (v, a) in reduced.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * a.clone();
            }
        }
        self.basis[pr] = pc;
    }

    /// After a feasible phase one, swap zero-valued artificials out of the
    /// basis or drop their (redundant) rows.
    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < self.artificial_start {
                i += 1;
                continue;
            }
            match (0..self.artificial_start).find(|&j| self.rows[i][j].abs().is_above_tolerance()) {
                Some(j) => {
                    let mut scratch = vec![T::zero(); self.cols + 1];
                    self.pivot(i, j, &mut scratch);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&n| q(n, 1)).collect()
    }

    #[test]
    fn small_maximization() {
        // max 3x + 2y, x + y ≤ 4, x + 3y ≤ 6, x ≤ 3
        let mut lp = LinearProgram::new(2);
        lp.maximize(ints(&[3, 2]))
            .constrain(ints(&[1, 1]), Sense::Le, q(4, 1))
            .constrain(ints(&[1, 3]), Sense::Le, q(6, 1))
            .constrain(ints(&[1, 0]), Sense::Le, q(3, 1));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                x: ints(&[3, 1]),
                value: q(11, 1)
            }
        );
    }

    #[test]
    fn equality_and_ge() {
        // max y, x + y = 1, x ≥ 1/3
        let mut lp = LinearProgram::new(2);
        lp.maximize(ints(&[0, 1]))
            .constrain(ints(&[1, 1]), Sense::Eq, q(1, 1))
            .constrain(ints(&[1, 0]), Sense::Ge, q(1, 3));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                x: vec![q(1, 3), q(2, 3)],
                value: q(2, 3)
            }
        );
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.constrain(ints(&[1]), Sense::Ge, q(2, 1))
            .constrain(ints(&[1]), Sense::Le, q(1, 1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.maximize(ints(&[1, 0]))
            .constrain(ints(&[-1, 1]), Sense::Le, q(1, 1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.maximize(ints(&[1, 0]))
            .constrain(ints(&[1, -1]), Sense::Eq, q(0, 1))
            .constrain(ints(&[2, -2]), Sense::Eq, q(0, 1))
            .constrain(ints(&[1, 1]), Sense::Eq, q(1, 1));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                x: vec![q(1, 2), q(1, 2)],
                value: q(1, 2)
            }
        );
    }

    #[test]
    fn runs_over_floats() {
        let mut lp = LinearProgram::<f64>::new(2);
        lp.maximize(vec![1.0, 1.0])
            .constrain(vec![1.0, 2.0], Sense::Le, 4.0)
            .constrain(vec![3.0, 1.0], Sense::Le, 6.0);
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert!((value - 2.8).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }
}
