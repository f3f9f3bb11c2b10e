use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::LogicError;

/// A family `θ_n : {0..n−1} → bool`, called as `θ(n, i)`.
pub type MonPred = Arc<dyn Fn(usize, usize) -> bool + Send + Sync>;

/// Named monadic numerical predicates.
///
/// Besides explicitly registered names, lookups resolve the families
/// `even`, `odd`, `first`, `last`, `mod<m>_<r>` (i mod m = r), `ge<k>`
/// (i ≥ k) and `lt<k>` (i < k).
#[derive(Clone, Default)]
pub struct MonRegistry {
    extra: BTreeMap<String, MonPred>,
}

impl fmt::Debug for MonRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.extra.keys()).finish()
    }
}

impl MonRegistry {
    pub fn standard() -> Self {
        MonRegistry::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, pred: MonPred) {
        self.extra.insert(name.into(), pred);
    }

    pub fn get(&self, name: &str) -> Result<MonPred, LogicError> {
        if let Some(p) = self.extra.get(name) {
            return Ok(p.clone());
        }
        builtin(name).ok_or_else(|| LogicError::UnknownMonPred(name.to_string()))
    }
}

fn builtin(name: &str) -> Option<MonPred> {
    let p: MonPred = match name {
        "even" => Arc::new(|_, i| i % 2 == 0),
        "odd" => Arc::new(|_, i| i % 2 == 1),
        "first" => Arc::new(|_, i| i == 0),
        "last" => Arc::new(|n, i| i + 1 == n),
        _ => {
            if let Some(rest) = name.strip_prefix("mod") {
                let (m, r) = rest.split_once('_')?;
                let (m, r): (usize, usize) = (m.parse().ok()?, r.parse().ok()?);
                if m == 0 {
                    return None;
                }
                Arc::new(move |_, i| i % m == r)
            } else if let Some(k) = name.strip_prefix("ge") {
                let k: usize = k.parse().ok()?;
                Arc::new(move |_, i| i >= k)
            } else if let Some(k) = name.strip_prefix("lt") {
                let k: usize = k.parse().ok()?;
                Arc::new(move |_, i| i < k)
            } else {
                return None;
            }
        }
    };
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        let r = MonRegistry::standard();
        assert!(r.get("even").unwrap()(5, 2));
        assert!(r.get("last").unwrap()(5, 4));
        assert!(r.get("mod3_1").unwrap()(9, 7));
        assert!(!r.get("ge3").unwrap()(9, 2));
        assert!(r.get("lt3").unwrap()(9, 2));
        assert!(matches!(r.get("mod0_0"), Err(LogicError::UnknownMonPred(_))));
        assert!(matches!(r.get("prime"), Err(LogicError::UnknownMonPred(_))));
    }
}
