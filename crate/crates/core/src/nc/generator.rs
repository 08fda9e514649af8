use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

/// An abstract generator. Indices are 0-based internally and printed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Gen {
    /// Entry of a magic unitary (self-adjoint projection).
    Q(u16, u16),
    /// Entry of a free unitary.
    U(u16, u16),
    /// Adjoint of a free-unitary entry.
    UStar(u16, u16),
    /// A formal unitary.
    W,
    /// Adjoint of the formal unitary.
    WStar,
}

impl Gen {
    pub fn q(i: usize, j: usize) -> Gen {
        Gen::Q(i as u16, j as u16)
    }

    pub fn u(i: usize, j: usize) -> Gen {
        Gen::U(i as u16, j as u16)
    }

    pub fn u_star(i: usize, j: usize) -> Gen {
        Gen::UStar(i as u16, j as u16)
    }

    pub fn adjoint(self) -> Gen {
        match self {
            Gen::Q(i, j) => Gen::Q(i, j),
            Gen::U(i, j) => Gen::UStar(i, j),
            Gen::UStar(i, j) => Gen::U(i, j),
            Gen::W => Gen::WStar,
            Gen::WStar => Gen::W,
        }
    }

    /// `(row, column)` for matrix generators.
    pub fn indices(self) -> Option<(usize, usize)> {
        match self {
            Gen::Q(i, j) | Gen::U(i, j) | Gen::UStar(i, j) => Some((i as usize, j as usize)),
            Gen::W | Gen::WStar => None,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Q(i, j) => write!(f, "q[{},{}]", i + 1, j + 1),
            Gen::U(i, j) => write!(f, "u[{},{}]", i + 1, j + 1),
            Gen::UStar(i, j) => write!(f, "u*[{},{}]", i + 1, j + 1),
            Gen::W => f.write_str("w"),
            Gen::WStar => f.write_str("w*"),
        }
    }
}

/// A monomial. Ordered degree-lexicographically; the empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn unit() -> Word {
        Word(Vec::new())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn gens(&self) -> &[Gen] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().map(|g| g.adjoint()).collect())
    }
}

impl From<Vec<Gen>> for Word {
    fn from(v: Vec<Gen>) -> Self {
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deglex_order() {
        let a = Word(vec![Gen::q(1, 1)]);
        let b = Word(vec![Gen::q(0, 0), Gen::q(0, 0)]);
        assert!(Word::unit() < a);
        assert!(a < b);
        assert!(Word(vec![Gen::q(0, 1)]) < Word(vec![Gen::q(1, 0)]));
    }

    #[test]
    fn adjoint_reverses() {
        let w = Word(vec![Gen::u(0, 1), Gen::q(1, 2), Gen::W]);
        assert_eq!(w.adjoint(), Word(vec![Gen::WStar, Gen::q(1, 2), Gen::u_star(0, 1)]));
        assert_eq!(w.adjoint().adjoint(), w);
        assert_eq!(w.to_string(), "u[1,2] q[2,3] w");
    }
}
