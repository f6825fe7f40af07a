use std::collections::{BTreeSet, HashSet, VecDeque};

use num_integer::Integer;

use crate::freegroup::Word;

fn neighbors(p: &Word, m: usize) -> impl Iterator<Item = Word> + '_ {
    (1..=m as i32)
        .flat_map(move |i| [i, -i])
        .map(move |l| &Word::from_letters([l]) * p)
}

fn generators_used(p: &BTreeSet<Word>) -> usize {
    p.iter().map(Word::max_generator).max().unwrap_or(0)
}

/// Whether `P` induces a connected subgraph of the Cayley tree with edges
/// between `p` and `f_i·p`, i.e. whether it contains every geodesic between its members.
pub fn is_connected(p: &BTreeSet<Word>) -> bool {
    let Some(start) = p.iter().next() else {
        return true;
    };
    let m = generators_used(p);
    let mut seen: HashSet<Word> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(x) = queue.pop_front() {
        for y in neighbors(&x, m) {
            if p.contains(&y) && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.len() == p.len()
}

/// Maximal runs `{gʲ·x}` inside `P`, each listed in increasing `j`.
pub fn lines_along(p: &BTreeSet<Word>, g: &Word) -> Vec<Vec<Word>> {
    let g_inv = g.inverse();
    let mut seen: HashSet<&Word> = HashSet::new();
    let mut out = Vec::new();
    for x in p {
        if seen.contains(x) {
            continue;
        }
        let mut start = x.clone();
        loop {
            let prev = &g_inv * &start;
            if !p.contains(&prev) || prev == *x {
                break;
            }
            start = prev;
        }
        let mut line = Vec::new();
        let mut cur = start;
        while let Some(member) = p.get(&cur) {
            if !seen.insert(member) {
                break;
            }
            line.push(cur.clone());
            cur = g * &cur;
        }
        out.push(line);
    }
    out
}

/// Lines in the `i`-direction.
pub fn lines(p: &BTreeSet<Word>, i: usize) -> Vec<Vec<Word>> {
    lines_along(p, &Word::generator(i))
}

fn gcd_of_lengths(lines: &[Vec<Word>]) -> usize {
    lines.iter().fold(0, |acc, l| acc.gcd(&l.len()))
}

/// For every generator, the line lengths have greatest common divisor 1.
/// Generators absent from `P` only give lines of length 1.
pub fn is_prime(p: &BTreeSet<Word>) -> bool {
    if p.is_empty() {
        return false;
    }
    (1..=generators_used(p)).all(|i| gcd_of_lengths(&lines(p, i)) == 1)
}

/// [`is_prime`] for every nonidentity direction `g`. Only `g = s·t⁻¹` with
/// `s ≠ t ∈ P` can produce a line longer than one point.
pub fn is_strongly_prime(p: &BTreeSet<Word>) -> bool {
    if p.is_empty() {
        return false;
    }
    let mut candidates: BTreeSet<Word> = BTreeSet::new();
    for s in p {
        for t in p {
            if s != t {
                candidates.insert(s * &t.inverse());
            }
        }
    }
    candidates
        .iter()
        .all(|g| gcd_of_lengths(&lines_along(p, g)) == 1)
}

pub fn translate_right(p: &BTreeSet<Word>, h: &Word) -> BTreeSet<Word> {
    p.iter().map(|x| x * h).collect()
}

/// Every connected `P ⊆ F_m` with `1 ≤ |P| ≤ max_size`, up to right
/// translation (each listed once, in the translate that is smallest as a
/// sorted list and contains the identity).
pub fn connected_sets(m: usize, max_size: usize) -> Vec<BTreeSet<Word>> {
    let mut found: BTreeSet<Vec<Word>> = BTreeSet::new();
    let mut current = BTreeSet::from([Word::identity()]);
    grow(m, max_size, &mut current, &mut found);
    let mut out: Vec<BTreeSet<Word>> = found.into_iter().map(|v| v.into_iter().collect()).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    out
}

fn canonical_translate(p: &BTreeSet<Word>) -> Vec<Word> {
    p.iter()
        .map(|h| {
            translate_right(p, &h.inverse())
                .into_iter()
                .collect::<Vec<_>>()
        })
        .min()
        .expect("nonempty set")
}

fn grow(m: usize, max_size: usize, current: &mut BTreeSet<Word>, found: &mut BTreeSet<Vec<Word>>) {
    if !found.insert(canonical_translate(current)) {
        return;
    }
    if current.len() == max_size {
        return;
    }
    let frontier: BTreeSet<Word> = current
        .iter()
        .flat_map(|x| neighbors(x, m).collect::<Vec<_>>())
        .filter(|y| !current.contains(y))
        .collect();
    for y in frontier {
        current.insert(y.clone());
        grow(m, max_size, current, found);
        current.remove(&y);
    }
}
