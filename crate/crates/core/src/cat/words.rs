//! The word problem for path equations.
//!
//! Equations are oriented by shortlex order into a rewriting system, which is
//! then completed within fixed caps. If completion succeeds, normal forms
//! decide equality exactly. Otherwise equality falls back to a bounded search
//! of the congruence class.

use std::collections::{HashSet, VecDeque};

use super::schema::{GenId, ObjId};

/// Cap on the number of words visited by one class search.
const CLASS_CAP: usize = 20_000;
/// Caps on completion: passes over critical pairs, rules, and rule length.
const COMPLETION_ROUNDS: usize = 8;
const COMPLETION_RULES: usize = 64;
const COMPLETION_LEN: usize = 12;

/// Outcome of comparing two parallel paths.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum PathEq {
    Equal,
    Distinct,
    /// Neither class could be exhausted within the bound.
    Inconclusive,
}

type Word = Vec<GenId>;

#[derive(Clone, Debug)]
pub(crate) struct WordProblem {
    gen_target: Vec<ObjId>,
    relations: Vec<(ObjId, Word, Word)>,
    rules: Vec<(Word, Word)>,
    confluent: bool,
}

fn shortlex_greater(a: &[GenId], b: &[GenId]) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a > b)
}

impl WordProblem {
    pub(crate) fn new(gen_target: Vec<ObjId>, relations: Vec<(ObjId, Word, Word)>) -> Self {
        let mut rules: Vec<(Word, Word)> = Vec::new();
        for (_, l, r) in &relations {
            if l == r {
                continue;
            }
            let rule = if shortlex_greater(l, r) {
                (l.clone(), r.clone())
            } else {
                (r.clone(), l.clone())
            };
            if !rules.contains(&rule) {
                rules.push(rule);
            }
        }
        let mut wp = WordProblem {
            gen_target,
            relations,
            rules,
            confluent: false,
        };
        wp.confluent = wp.complete();
        wp
    }

    pub(crate) fn is_confluent(&self) -> bool {
        self.confluent
    }

    fn find_redex(&self, w: &[GenId]) -> Option<(usize, usize)> {
        for pos in 0..w.len() {
            for (i, (l, _)) in self.rules.iter().enumerate() {
                if w[pos..].starts_with(l) {
                    return Some((pos, i));
                }
            }
        }
        None
    }

    pub(crate) fn is_reducible(&self, w: &[GenId]) -> bool {
        self.find_redex(w).is_some()
    }

    /// Leftmost-first rewriting to the shortlex-irreducible form.
    pub(crate) fn normalize(&self, w: &[GenId]) -> Word {
        let mut w = w.to_vec();
        while let Some((pos, i)) = self.find_redex(&w) {
            let (l, r) = &self.rules[i];
            w.splice(pos..pos + l.len(), r.iter().copied());
        }
        w
    }

    /// Every critical pair of the current rules, as the two one-step reducts.
    fn critical_pairs(&self) -> Vec<(Word, Word)> {
        let mut out = Vec::new();
        for (l1, r1) in &self.rules {
            for (l2, r2) in &self.rules {
                // l2 occurring inside l1
                if l2.len() <= l1.len() && !(l1 == l2 && r1 == r2) {
                    for pos in 0..=l1.len() - l2.len() {
                        if l1[pos..pos + l2.len()] == l2[..] {
                            let mut b = l1[..pos].to_vec();
                            b.extend_from_slice(r2);
                            b.extend_from_slice(&l1[pos + l2.len()..]);
                            out.push((r1.clone(), b));
                        }
                    }
                }
                // proper suffix of l1 equal to proper prefix of l2
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] == l2[..k] {
                        let mut a = r1.clone();
                        a.extend_from_slice(&l2[k..]);
                        let mut b = l1[..l1.len() - k].to_vec();
                        b.extend_from_slice(r2);
                        out.push((a, b));
                    }
                }
            }
        }
        out
    }

    /// Bounded Knuth-Bendix completion: orients every non-joining critical
    /// pair into a new rule until none remain. Gives up past the caps.
    fn complete(&mut self) -> bool {
        for _ in 0..COMPLETION_ROUNDS {
            let mut added = false;
            for (a, b) in self.critical_pairs() {
                let (a, b) = (self.normalize(&a), self.normalize(&b));
                if a == b {
                    continue;
                }
                let rule = if shortlex_greater(&a, &b) { (a, b) } else { (b, a) };
                if rule.0.len() > COMPLETION_LEN {
                    return false;
                }
                self.rules.push(rule);
                added = true;
                if self.rules.len() > COMPLETION_RULES {
                    return false;
                }
            }
            if !added {
                return true;
            }
        }
        false
    }

    fn object_at(&self, src: ObjId, w: &[GenId], pos: usize) -> ObjId {
        if pos == 0 {
            src
        } else {
            self.gen_target[w[pos - 1].0]
        }
    }

    /// All words one equation application away from `w`.
    fn neighbours(&self, src: ObjId, w: &[GenId], out: &mut Vec<Word>) {
        for (at, l, r) in &self.relations {
            for (a, b) in [(l, r), (r, l)] {
                if a.is_empty() {
                    for pos in 0..=w.len() {
                        if self.object_at(src, w, pos) == *at {
                            let mut n = w[..pos].to_vec();
                            n.extend_from_slice(b);
                            n.extend_from_slice(&w[pos..]);
                            out.push(n);
                        }
                    }
                } else if a.len() <= w.len() {
                    for pos in 0..=w.len() - a.len() {
                        if w[pos..pos + a.len()] == a[..] {
                            let mut n = w[..pos].to_vec();
                            n.extend_from_slice(b);
                            n.extend_from_slice(&w[pos + a.len()..]);
                            out.push(n);
                        }
                    }
                }
            }
        }
    }

    /// Searches the class of `start` for `goal`. Returns (found, class exhausted).
    fn search(&self, src: ObjId, start: &[GenId], goal: &[GenId], bound: usize) -> (bool, bool) {
        if start == goal {
            return (true, true);
        }
        let mut seen: HashSet<Word> = HashSet::from([start.to_vec()]);
        let mut queue: VecDeque<Word> = VecDeque::from([start.to_vec()]);
        let mut exhausted = true;
        let mut buf = Vec::new();
        while let Some(w) = queue.pop_front() {
            buf.clear();
            self.neighbours(src, &w, &mut buf);
            for n in buf.drain(..) {
                if n.len() > bound {
                    exhausted = false;
                    continue;
                }
                if n == goal {
                    return (true, exhausted);
                }
                if seen.contains(&n) {
                    continue;
                }
                if seen.len() >= CLASS_CAP {
                    return (false, false);
                }
                seen.insert(n.clone());
                queue.push_back(n);
            }
        }
        (false, exhausted)
    }

    pub(crate) fn equal(&self, src: ObjId, p: &[GenId], q: &[GenId], bound: usize) -> PathEq {
        if p == q {
            return PathEq::Equal;
        }
        let same_form = self.normalize(p) == self.normalize(q);
        if same_form {
            return PathEq::Equal;
        }
        if self.confluent {
            return PathEq::Distinct;
        }
        let (found, exhausted) = self.search(src, p, q, bound);
        if found {
            return PathEq::Equal;
        }
        if exhausted {
            return PathEq::Distinct;
        }
        let (found, exhausted) = self.search(src, q, p, bound);
        if found {
            PathEq::Equal
        } else if exhausted {
            PathEq::Distinct
        } else {
            PathEq::Inconclusive
        }
    }
}
