use std::fmt;

use super::number::Coeff;
use super::poly::{Monomial, Scalar};
use crate::error::{Error, Result};

/// One rewrite rule `lhs → rhs` with a monomial left side of positive powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Monomial,
    pub rhs: Scalar,
}

/// Polynomial relations applied to fixpoint during normalization.
///
/// Construction rejects rules whose right side can be rewritten by any rule
/// (including itself). Each rewrite then removes one copy of a left side
/// without creating new redexes from the inserted right side alone, so the
/// process terminates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationSet {
    rules: Vec<Rule>,
}

const MAX_REWRITES: usize = 100_000;

impl RelationSet {
    pub fn empty() -> Self {
        RelationSet::default()
    }

    pub fn new(rules: Vec<Rule>) -> Result<Self> {
        for r in &rules {
            if r.lhs.is_one() || r.lhs.powers().iter().any(|(_, k)| *k <= 0) || !r.lhs.exponentials().is_empty() {
                return Err(Error::InvalidInput(format!(
                    "relation left side must be a monomial with positive powers, got {}",
                    Scalar::term(Coeff::one(), r.lhs.clone())
                )));
            }
        }
        for r in &rules {
            for (m, _) in r.rhs.terms() {
                if rules.iter().any(|q| m.divide(&q.lhs).is_some()) {
                    return Err(Error::InvalidInput(format!(
                        "relation right side `{}` is itself reducible",
                        r.rhs
                    )));
                }
            }
        }
        Ok(RelationSet { rules })
    }

    pub fn rule(lhs: Monomial, rhs: Scalar) -> Rule {
        Rule { lhs, rhs }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Canonical form: rewrite until no rule applies.
    pub fn normalize(&self, s: &Scalar) -> Scalar {
        if self.rules.is_empty() {
            return s.clone();
        }
        let mut cur = s.clone();
        for _ in 0..MAX_REWRITES {
            let mut changed = false;
            let mut next = Scalar::zero();
            for (m, c) in cur.terms() {
                let hit = self.rules.iter().find_map(|r| m.divide(&r.lhs).map(|rest| (r, rest)));
                match hit {
                    Some((r, rest)) => {
                        changed = true;
                        next = &next + &r.rhs.mul_monomial(&rest).scale(c);
                    }
                    None => next.add_term(m.clone(), c.clone()),
                }
            }
            cur = next;
            if !changed {
                return cur;
            }
        }
        panic!("relation rewriting did not reach a fixpoint for {}", s);
    }
}

impl fmt::Display for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, r) in self.rules.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} -> {}", Scalar::term(Coeff::one(), r.lhs.clone()), r.rhs)?;
        }
        Ok(())
    }
}

/// Normal form of a scalar under a relation set.
pub fn normalize(s: &Scalar, rel: &RelationSet) -> Scalar {
    rel.normalize(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::symbol::Symbol;

    fn ad_rule() -> RelationSet {
        let lhs = Monomial::var(Symbol::new("a"), 1).mul(&Monomial::var(Symbol::new("d"), 1));
        let rhs = &Scalar::one() + &(&Scalar::var("b") * &Scalar::var("c"));
        RelationSet::new(vec![RelationSet::rule(lhs, rhs)]).unwrap()
    }

    #[test]
    fn unimodular_relation() {
        let rel = ad_rule();
        let det = &(&Scalar::var("a") * &Scalar::var("d")) - &(&Scalar::var("b") * &Scalar::var("c"));
        assert!(rel.normalize(&det).is_one());
    }

    #[test]
    fn higher_powers_reduce_to_fixpoint() {
        let rel = ad_rule();
        let ad = &Scalar::var("a") * &Scalar::var("d");
        let sq = &ad * &ad;
        let expect = (&Scalar::one() + &(&Scalar::var("b") * &Scalar::var("c"))).pow(2);
        assert_eq!(rel.normalize(&sq), expect);
    }

    #[test]
    fn normalize_is_idempotent() {
        let rel = ad_rule();
        let s = &(&Scalar::var("a") * &Scalar::var("a")) * &(&Scalar::var("d") + &Scalar::var("b"));
        let once = rel.normalize(&s);
        assert_eq!(rel.normalize(&once), once);
    }

    #[test]
    fn reducible_right_side_rejected() {
        let lhs = Monomial::var(Symbol::new("a"), 1);
        let rhs = &Scalar::var("a") * &Scalar::var("b");
        assert!(RelationSet::new(vec![RelationSet::rule(lhs, rhs)]).is_err());
    }
}
