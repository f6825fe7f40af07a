use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::freegroup::{ball, ball_size, Word};
use crate::system::{CongruenceSystem, Relation};

use super::family::{verify_family, FiniteFamily, WitnessAssignment};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Sat(FiniteFamily),
    /// No family (not all empty) lives inside the searched ball. This is only
    /// a proof of unsatisfiability once the radius reaches the theoretical
    /// bound.
    UnsatWithin(usize),
}

/// Upper bound on the number of search variables.
pub const MAX_SEARCH_POINTS: u128 = 1 << 21;

const NONE: u32 = u32::MAX;

struct Link {
    relation: Relation,
    left: u32,
    right: u32,
    /// `forward[x]` is the index of `g·x`.
    forward: Vec<u32>,
    /// `backward[y]` is the index of `g⁻¹·y`.
    backward: Vec<u32>,
}

struct Problem {
    points: Vec<Word>,
    links: Vec<Link>,
}

/// Domains: bit `v` set means value `v` (0 = in no set, `k` = in `A_k`) is
/// still possible.
type Domains = Vec<u32>;

impl Problem {
    fn build(sys: &CongruenceSystem, wit: &WitnessAssignment, m: usize, radius: usize) -> Problem {
        let points = ball(m, radius);
        let index: HashMap<&Word, u32> = points
            .iter()
            .enumerate()
            .map(|(i, w)| (w, i as u32))
            .collect();
        let links = sys
            .statements()
            .iter()
            .zip(wit.words())
            .map(|(st, g)| {
                let g_inv = g.inverse();
                let lookup = |w: Word| index.get(&w).copied().unwrap_or(NONE);
                Link {
                    relation: st.kind,
                    left: (st.left.bits() as u32) << 1,
                    right: (st.right.bits() as u32) << 1,
                    forward: points.iter().map(|x| lookup(g * x)).collect(),
                    backward: points.iter().map(|y| lookup(&g_inv * y)).collect(),
                }
            })
            .collect();
        Problem { points, links }
    }

    fn initial_domains(&self, r: usize) -> Domains {
        let full = (1u32 << (r + 1)) - 1;
        let mut dom = vec![full; self.points.len()];
        for link in &self.links {
            for (x, d) in dom.iter_mut().enumerate() {
                if link.forward[x] == NONE {
                    *d &= !link.left;
                }
                if link.relation == Relation::Congruence && link.backward[x] == NONE {
                    *d &= !link.right;
                }
            }
        }
        dom
    }

    fn narrow(dom: &mut Domains, p: u32, mask: u32, queue: &mut Vec<u32>) -> bool {
        let d = &mut dom[p as usize];
        let nd = *d & mask;
        if nd != *d {
            *d = nd;
            if nd == 0 {
                return false;
            }
            queue.push(p);
        }
        true
    }

    /// Arc consistency over all statements; false on a wiped-out domain.
    fn propagate(&self, dom: &mut Domains, mut queue: Vec<u32>) -> bool {
        while let Some(p) = queue.pop() {
            for link in &self.links {
                let (l, r) = (link.left, link.right);
                let y = link.forward[p as usize];
                if y != NONE {
                    let dx = dom[p as usize];
                    if dx & !l == 0 && !Self::narrow(dom, y, r, &mut queue) {
                        return false;
                    }
                    if link.relation == Relation::Congruence
                        && dx & l == 0
                        && !Self::narrow(dom, y, !r, &mut queue)
                    {
                        return false;
                    }
                }
                let x = link.backward[p as usize];
                if x != NONE {
                    let dy = dom[p as usize];
                    if link.relation == Relation::Congruence
                        && dy & !r == 0
                        && !Self::narrow(dom, x, l, &mut queue)
                    {
                        return false;
                    }
                    if dy & r == 0 && !Self::narrow(dom, x, !l, &mut queue) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Depth-first over variables in index order, values ascending.
    fn solve(&self, dom: Domains) -> Option<Domains> {
        struct Frame {
            var: usize,
            remaining: u32,
            snapshot: Domains,
        }
        let first_open =
            |d: &Domains, from: usize| (from..d.len()).find(|&v| d[v].count_ones() > 1);
        let Some(var) = first_open(&dom, 0) else {
            return Some(dom);
        };
        let mut stack = vec![Frame {
            var,
            remaining: dom[var],
            snapshot: dom,
        }];
        while let Some(frame) = stack.last_mut() {
            if frame.remaining == 0 {
                stack.pop();
                continue;
            }
            let value = frame.remaining.trailing_zeros();
            frame.remaining &= !(1 << value);
            let var = frame.var;
            let mut d = frame.snapshot.clone();
            d[var] = 1 << value;
            if !self.propagate(&mut d, vec![var as u32]) {
                continue;
            }
            match first_open(&d, var + 1) {
                None => return Some(d),
                Some(next) => stack.push(Frame {
                    var: next,
                    remaining: d[next],
                    snapshot: d,
                }),
            }
        }
        None
    }
}

/// Searches `Ball(radius + max witness length)` in `F_m` for sets, not all
/// empty, satisfying the system with the given witnesses. Constraints that
/// would leave the ball are pruned, so any family returned is an exact
/// solution. The first solution in the fixed order (points length-lex,
/// earliest possible first member, values ascending) is returned.
pub fn search_family(
    sys: &CongruenceSystem,
    wit: &WitnessAssignment,
    m: usize,
    radius: usize,
) -> Result<SearchOutcome> {
    if wit.len() != sys.len() {
        return Err(Error::ArityMismatch {
            expected: sys.len(),
            found: wit.len(),
        });
    }
    if wit.max_generator() > m {
        return Err(Error::IndexOutOfRange {
            index: wit.max_generator(),
            r: m,
        });
    }
    if sys.r() > 30 {
        return Err(Error::LimitExceeded {
            what: "r",
            value: sys.r(),
            limit: 30,
        });
    }
    let universe = radius + wit.max_len();
    let size = ball_size(m, universe);
    if size > MAX_SEARCH_POINTS {
        return Err(Error::LimitExceeded {
            what: "search ball size",
            value: usize::try_from(size).unwrap_or(usize::MAX),
            limit: MAX_SEARCH_POINTS as usize,
        });
    }
    let problem = Problem::build(sys, wit, m, universe);
    let n = problem.points.len();
    let mut base = problem.initial_domains(sys.r());
    let everything: Vec<u32> = (0..n as u32).collect();
    let settled = problem.propagate(&mut base, everything);
    debug_assert!(settled, "the all-empty assignment is always consistent");

    for first in 0..n {
        if base[first] & !1 == 0 {
            continue;
        }
        let mut dom = base.clone();
        dom[first] &= !1;
        if problem.propagate(&mut dom, vec![first as u32]) {
            if let Some(solution) = problem.solve(dom) {
                let fam = family_from(&problem, &solution, sys.r(), m)?;
                let verdict = verify_family(&fam, wit, sys)?;
                assert!(
                    verdict.holds,
                    "search produced a family that fails verification: {verdict:?}"
                );
                return Ok(SearchOutcome::Sat(fam));
            }
        }
        base[first] = 1;
        problem.propagate(&mut base, vec![first as u32]);
    }
    Ok(SearchOutcome::UnsatWithin(radius))
}

fn family_from(problem: &Problem, dom: &Domains, r: usize, m: usize) -> Result<FiniteFamily> {
    let mut sets = vec![Vec::new(); r];
    for (p, &d) in problem.points.iter().zip(dom) {
        let value = d.trailing_zeros() as usize;
        if value > 0 {
            sets[value - 1].push(p.clone());
        }
    }
    FiniteFamily::group(m, sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::family::normalize_family;
    use crate::numeric::make_cp;

    fn f(k: i64) -> Word {
        Word::generator(1).pow(k)
    }

    #[test]
    fn integer_example_is_found() {
        let sys = CongruenceSystem::from_congruences(
            3,
            &[(&[1], &[2]), (&[1], &[3]), (&[1, 2], &[1, 3])],
        )
        .unwrap();
        let wit = WitnessAssignment(vec![f(-1), f(1), f(1)]);
        let SearchOutcome::Sat(fam) = search_family(&sys, &wit, 1, 3).unwrap() else {
            panic!("expected a solution");
        };
        assert!(verify_family(&fam, &wit, &sys).unwrap().holds);
        let norm = normalize_family(&fam).unwrap();
        assert!(verify_family(&norm, &wit, &sys).unwrap().holds);
    }

    #[test]
    fn trivial_statement() {
        let sys = CongruenceSystem::from_congruences(1, &[(&[1], &[1])]).unwrap();
        let wit = WitnessAssignment(vec![Word::identity()]);
        assert_eq!(
            search_family(&sys, &wit, 1, 0).unwrap(),
            SearchOutcome::Sat(FiniteFamily::group(1, vec![vec![Word::identity()]]).unwrap())
        );
    }

    #[test]
    fn cp3_free_pair_is_unsat() {
        let sys = make_cp(3).unwrap();
        let wit = WitnessAssignment(vec![
            Word::generator(1),
            Word::generator(2),
            Word::generator(1),
        ]);
        assert_eq!(
            search_family(&sys, &wit, 2, 3).unwrap(),
            SearchOutcome::UnsatWithin(3)
        );
    }

    #[test]
    fn rejects_bad_input() {
        let sys = CongruenceSystem::from_congruences(2, &[(&[1], &[2])]).unwrap();
        assert!(matches!(
            search_family(&sys, &WitnessAssignment(vec![]), 1, 1),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            search_family(&sys, &WitnessAssignment(vec![Word::generator(3)]), 2, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn two_sets_swap() {
        let sys = CongruenceSystem::from_congruences(2, &[(&[1], &[2])]).unwrap();
        let wit = WitnessAssignment(vec![Word::generator(1)]);
        let SearchOutcome::Sat(fam) = search_family(&sys, &wit, 2, 2).unwrap() else {
            panic!("expected a solution");
        };
        assert!(fam.set(1).len() == fam.set(2).len() && !fam.set(1).is_empty());
    }
}
