use alloc::rc::Rc;
use alloc::vec::Vec;

use crate::pl::PLMap;

/// How a stored signature arises from the input generators.
///
/// The signature of a signed orbital `(A, s)` with provenance `p` is the
/// one-bump factor on `A` of the element `p` evaluates to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Generator(usize),
    /// `∏ wᵢ^eᵢ`, left to right.
    Product(Vec<(Rc<Provenance>, i64)>),
    /// `base` conjugated by `by^power`.
    Conjugate {
        base: Rc<Provenance>,
        by: Rc<Provenance>,
        power: i64,
    },
}

impl Provenance {
    pub fn evaluate(&self, generators: &[PLMap]) -> PLMap {
        match self {
            Provenance::Generator(i) => generators[*i].clone(),
            Provenance::Product(parts) => parts.iter().fold(PLMap::identity(), |acc, (p, e)| {
                acc.compose(&p.evaluate(generators).pow(*e))
            }),
            Provenance::Conjugate { base, by, power } => base
                .evaluate(generators)
                .conjugate(&by.evaluate(generators).pow(*power)),
        }
    }

    /// Flattens to a word of `(generator, exponent)` letters.
    pub fn to_word(&self) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        self.push_word(1, &mut out);
        out
    }

    fn push_word(&self, sign: i64, out: &mut Vec<(usize, i64)>) {
        match self {
            Provenance::Generator(i) => push_letter(out, *i, sign),
            Provenance::Product(parts) => {
                let emit = |p: &Provenance, e: i64, out: &mut Vec<(usize, i64)>| {
                    for _ in 0..e.unsigned_abs() {
                        p.push_word(sign * e.signum(), out);
                    }
                };
                if sign > 0 {
                    parts.iter().for_each(|(p, e)| emit(p, *e, out));
                } else {
                    parts.iter().rev().for_each(|(p, e)| emit(p, *e, out));
                }
            }
            Provenance::Conjugate { base, by, power } => {
                let by_word = |k: i64, out: &mut Vec<(usize, i64)>| {
                    for _ in 0..k.unsigned_abs() {
                        by.push_word(k.signum(), out);
                    }
                };
                by_word(-power, out);
                base.push_word(sign, out);
                by_word(*power, out);
            }
        }
    }
}

/// Appends a letter, cancelling or merging with the previous one.
pub(crate) fn push_letter(out: &mut Vec<(usize, i64)>, g: usize, e: i64) {
    if e == 0 {
        return;
    }
    if let Some(last) = out.last_mut() {
        if last.0 == g {
            last.1 += e;
            if last.1 == 0 {
                out.pop();
            }
            return;
        }
    }
    out.push((g, e));
}
