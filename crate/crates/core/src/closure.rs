//! Length-lex word closure of a family of square matrices.
//!
//! Words are extended level by level: every accepted word of length `L` is
//! multiplied on the right by each generator, and a candidate is accepted iff
//! its relative residual against the span of everything accepted so far
//! exceeds the threshold. Closure stops after a full level adds nothing.

use crate::linalg::{flatten, unflatten, CMat, CVec, SpanBuilder};

#[derive(Debug, Clone)]
pub struct WordClosure {
    n: usize,
    words: Vec<Vec<usize>>,
    members: Vec<CMat>,
    span: SpanBuilder,
    unit_adjoined: bool,
}

impl WordClosure {
    /// Closes `gens` under multiplication, optionally adjoining the unit as
    /// the empty word.
    pub fn generate(gens: &[CMat], adjoin_unit: bool, rel: f64) -> Self {
        let n = gens.first().map(|g| g.nrows()).unwrap_or(0);
        let mut out = WordClosure {
            n,
            words: Vec::new(),
            members: Vec::new(),
            span: SpanBuilder::new(n * n),
            unit_adjoined: adjoin_unit,
        };
        if adjoin_unit {
            let id = CMat::identity(n, n);
            if out.span.try_push(&flatten(&id), rel) {
                out.words.push(Vec::new());
                out.members.push(id);
            }
        }
        let mut frontier: Vec<usize> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            if out.span.try_push(&flatten(g), rel) {
                out.words.push(vec![i]);
                out.members.push(g.clone());
                frontier.push(out.members.len() - 1);
            }
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &w in &frontier {
                for (i, g) in gens.iter().enumerate() {
                    if out.words[w].last() == Some(&i) && is_idempotent(g) {
                        continue;
                    }
                    let cand = &out.members[w] * g;
                    let scale = out.members[w].norm() * g.norm();
                    if out.span.try_push_scaled(&flatten(&cand), rel, scale) {
                        let mut word = out.words[w].clone();
                        word.push(i);
                        out.words.push(word);
                        out.members.push(cand);
                        next.push(out.members.len() - 1);
                    }
                }
            }
            frontier = next;
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.members.len()
    }

    /// Length of the longest accepted word.
    pub fn ell(&self) -> usize {
        self.words.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    /// The accepted words evaluated as matrices.
    pub fn members(&self) -> &[CMat] {
        &self.members
    }

    pub fn unit_adjoined(&self) -> bool {
        self.unit_adjoined
    }

    /// Hilbert-Schmidt orthonormal basis of the span.
    pub fn orthonormal_basis(&self) -> Vec<CMat> {
        self.span
            .basis()
            .iter()
            .map(|v| unflatten(v, self.n, self.n))
            .collect()
    }

    pub fn flat_basis(&self) -> &[CVec] {
        self.span.basis()
    }

    /// Relative residual of `m` against the span.
    pub fn residual(&self, m: &CMat) -> f64 {
        self.span.relative_residual(&flatten(m))
    }

    /// Largest relative residual of products and adjoints of accepted members.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.members {
            worst = worst.max(self.residual(&a.adjoint()));
            for b in &self.members {
                let scale = (a.norm() * b.norm()).max(f64::MIN_POSITIVE);
                worst = worst.max(self.span.residual(&flatten(&(a * b))) / scale);
            }
        }
        worst
    }
}

fn is_idempotent(g: &CMat) -> bool {
    let d = g * g - g;
    d.norm() <= 1e-12 * g.norm().max(1.0)
}
