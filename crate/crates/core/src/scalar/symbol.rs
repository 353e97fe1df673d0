use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// A commuting indeterminate: pseudopotential, coefficient function, spectral
/// parameter, gauge entry or a formal-derivative tag such as `a1,x`.
///
/// Names order naturally (`y2 < y10`), so rendered output reads in index order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Name without any derivative tag.
    pub fn base(&self) -> &str {
        self.0.split(',').next().unwrap_or(&self.0)
    }

    /// Derivative tag letters, sorted (`"xt"` for `u,tx` and `u,xt` alike).
    pub fn tag(&self) -> &str {
        self.0.split_once(',').map(|(_, t)| t).unwrap_or("")
    }

    /// Order of the formal derivative this symbol stands for.
    pub fn derivative_order(&self) -> usize {
        self.tag().len()
    }

    /// The symbol for one more derivative along `var`.
    pub fn tagged(&self, var: char) -> Symbol {
        let mut letters: Vec<char> = self.tag().chars().collect();
        letters.push(var);
        letters.sort_unstable();
        let tag: String = letters.into_iter().collect();
        Symbol::new(&format!("{},{}", self.base(), tag))
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        natural_cmp(&self.0, &other.0)
    }
}

/// Compare strings treating maximal digit runs as numbers.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut ai, mut bi) = (a.as_bytes(), b.as_bytes());
    loop {
        match (ai.first(), bi.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let la = ai.iter().take_while(|c| c.is_ascii_digit()).count();
                let lb = bi.iter().take_while(|c| c.is_ascii_digit()).count();
                let (na, nb) = (trim_zeros(&ai[..la]), trim_zeros(&bi[..lb]));
                let ord = na.len().cmp(&nb.len()).then_with(|| na.cmp(nb)).then(la.cmp(&lb));
                if ord != Ordering::Equal {
                    return ord;
                }
                ai = &ai[la..];
                bi = &bi[lb..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                ai = &ai[1..];
                bi = &bi[1..];
            }
        }
    }
}

fn trim_zeros(d: &[u8]) -> &[u8] {
    let k = d.iter().take_while(|&&c| c == b'0').count();
    &d[k.min(d.len().saturating_sub(1))..]
}
