//! Substitutions: monoid homomorphisms of the free monoid given by finitely
//! many variable images.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::word::{Var, Word};

/// A finite map from variables to words. Unmapped variables are fixed; an
/// explicit empty image deletes the variable.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Substitution {
    map: BTreeMap<Var, Word>,
}

impl Substitution {
    pub fn identity() -> Substitution {
        Substitution::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, Word)>>(pairs: I) -> Substitution {
        Substitution {
            map: pairs.into_iter().collect(),
        }
    }

    pub fn set(&mut self, x: Var, image: Word) {
        self.map.insert(x, image);
    }

    pub fn with(mut self, x: Var, image: Word) -> Substitution {
        self.set(x, image);
        self
    }

    pub fn get(&self, x: Var) -> Option<&Word> {
        self.map.get(&x)
    }

    /// The image of `x`, which is `x` itself when unmapped.
    pub fn image(&self, x: Var) -> Word {
        self.map
            .get(&x)
            .cloned()
            .unwrap_or_else(|| Word::from_vars(vec![x]))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Word)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, w: &[Var]) -> Word {
        let mut out = Vec::with_capacity(w.len());
        for &x in w {
            match self.map.get(&x) {
                Some(img) => out.extend_from_slice(img),
                None => out.push(x),
            }
        }
        Word::from_vars(out)
    }

    /// `self` followed by `then`: `x ↦ (xθ)ψ`. Variables mapped only by
    /// `then` keep their `then` images.
    pub fn then(&self, then: &Substitution) -> Substitution {
        let mut map: BTreeMap<Var, Word> = self
            .map
            .iter()
            .map(|(&x, img)| (x, then.apply(img)))
            .collect();
        for (&x, img) in &then.map {
            map.entry(x).or_insert_with(|| img.clone());
        }
        Substitution { map }
    }

    /// Drop entries that map a variable to itself.
    pub fn normalized(&self) -> Substitution {
        Substitution {
            map: self
                .map
                .iter()
                .filter(|(x, img)| img.as_slice() != [**x])
                .map(|(x, img)| (*x, img.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, img) in &self.map {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{x}={img}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{v, w};

    #[test]
    fn apply_is_homomorphic() {
        let th = Substitution::from_pairs([(v("x"), w("ab")), (v("y"), w("1"))]);
        assert_eq!(th.apply(&w("xyzx")), w("abzab"));
        let (a, b) = (w("xz"), w("yx"));
        assert_eq!(th.apply(&a.concat(&b)), th.apply(&a).concat(&th.apply(&b)));
        assert_eq!(th.apply(&Word::empty()), Word::empty());
        assert_eq!(Substitution::identity().apply(&w("xyz")), w("xyz"));
    }

    #[test]
    fn composition() {
        let f = Substitution::from_pairs([(v("x"), w("ay"))]);
        let g = Substitution::from_pairs([(v("y"), w("bb")), (v("z"), w("1"))]);
        let fg = f.then(&g);
        for s in ["xyz", "zzx", "1"] {
            assert_eq!(fg.apply(&w(s)), g.apply(&f.apply(&w(s))));
        }
    }

    #[test]
    fn json_round_trip() {
        let th = Substitution::from_pairs([(v("z1"), w("x0z1")), (v("x1"), w("1"))]);
        let text = serde_json::to_string(&th).unwrap();
        assert_eq!(text, r#"{"x1":"1","z1":"x0z1"}"#);
        let back: Substitution = serde_json::from_str(&text).unwrap();
        assert_eq!(back, th);
    }
}
