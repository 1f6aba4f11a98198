//! Exact arithmetic in free groups.
//!
//! Generators are single lowercase ASCII letters; the matching uppercase
//! letter is the inverse generator. The empty word is written `1`.

use std::fmt;
use std::str::FromStr;

use crate::error::WordParseError;

/// A generator or an inverse generator.
///
/// Ordered so that `a < A < b < B < ...`, which is the letter order used for
/// every shortlex enumeration in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    gen: u8,
    inverse: bool,
}

impl Letter {
    /// Positive letter for generator `gen` (a lowercase ASCII letter).
    pub fn new(gen: u8) -> Self {
        debug_assert!(gen.is_ascii_lowercase());
        Letter { gen, inverse: false }
    }

    pub fn from_char(c: char) -> Option<Self> {
        if c.is_ascii_lowercase() {
            Some(Letter { gen: c as u8, inverse: false })
        } else if c.is_ascii_uppercase() {
            Some(Letter { gen: c.to_ascii_lowercase() as u8, inverse: true })
        } else {
            None
        }
    }

    pub fn generator(self) -> u8 {
        self.gen
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    pub fn to_char(self) -> char {
        if self.inverse {
            self.gen.to_ascii_uppercase() as char
        } else {
            self.gen as char
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

/// Freely reduces `raw`; the result is the unique reduced representative.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in raw {
        push_reduced(&mut out, l);
    }
    Word(out)
}

#[inline]
pub(crate) fn push_reduced(stack: &mut Vec<Letter>, l: Letter) {
    if stack.last() == Some(&l.inv()) {
        stack.pop();
    } else {
        stack.push(l);
    }
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// Builds a word from letters, freely reducing them.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        free_reduce(letters)
    }

    /// Wraps letters the caller knows to be reduced.
    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inv()));
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Product `self · other`, reduced.
    pub fn mul(&self, other: &Word) -> Word {
        let k = cancellation(&self.0, &other.0);
        let mut v = Vec::with_capacity(self.len() + other.len() - 2 * k);
        v.extend_from_slice(&self.0[..self.len() - k]);
        v.extend_from_slice(&other.0[k..]);
        Word(v)
    }

    /// Product of several words, left to right.
    pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Word {
        free_reduce(words.into_iter().flat_map(|w| w.0.iter().copied()))
    }

    /// `self^e` for any integer exponent.
    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let (core, conj) = cyclic_reduce(&base);
        // base = conj⁻¹ core conj, and core is cyclically reduced so its
        // powers need no reduction.
        let n = e.unsigned_abs() as usize;
        let mut v = Vec::with_capacity(core.len() * n + 2 * conj.len());
        v.extend(conj.inverse().0);
        for _ in 0..n {
            v.extend_from_slice(&core.0);
        }
        v.extend_from_slice(&conj.0);
        free_reduce(v)
    }

    /// `x⁻¹ · self · x`.
    pub fn conjugate_by(&self, x: &Word) -> Word {
        Word::product([&x.inverse(), self, x])
    }

    /// Commutator `u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        Word::product([u, v, &u.inverse(), &v.inverse()])
    }

    /// True when the first and last letters are not mutually inverse.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => self.len() == 1 || a != b.inv(),
            _ => true,
        }
    }

    /// Cyclic rotation starting at letter `k`.
    pub fn rotate(&self, k: usize) -> Word {
        let n = self.len();
        if n == 0 {
            return Word::empty();
        }
        let k = k % n;
        let mut v = Vec::with_capacity(n);
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Prefix of length `k` (a reduced word itself).
    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k].to_vec())
    }

    pub fn suffix_from(&self, k: usize) -> Word {
        Word(self.0[k..].to_vec())
    }

    /// Sum of signs of the letters on each generator of `gens`.
    pub fn exponent_sums(&self, gens: &[u8]) -> Vec<i64> {
        let mut v = vec![0i64; gens.len()];
        for l in &self.0 {
            if let Some(i) = gens.iter().position(|&g| g == l.gen) {
                v[i] += l.sign();
            }
        }
        v
    }

    /// The distinct generator symbols occurring in the word.
    pub fn generators(&self) -> Vec<u8> {
        let mut g: Vec<u8> = self.0.iter().map(|l| l.gen).collect();
        g.sort_unstable();
        g.dedup();
        g
    }
}

fn cancellation(a: &[Letter], b: &[Letter]) -> usize {
    a.iter()
        .rev()
        .zip(b.iter())
        .take_while(|(x, y)| **x == y.inv())
        .count()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordParseError;

    /// Parses `abAB`-style text; `1` is the empty word. Input is freely
    /// reduced, so `aA` parses to the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "1" {
            return Ok(Word::empty());
        }
        if t.is_empty() {
            return Err(WordParseError::Empty);
        }
        let mut letters = Vec::with_capacity(t.len());
        for (i, c) in t.chars().enumerate() {
            match Letter::from_char(c) {
                Some(l) => letters.push(l),
                None => return Err(WordParseError::BadChar { column: i + 1, found: c }),
            }
        }
        Ok(free_reduce(letters))
    }
}

/// Splits `w` as `conjugator⁻¹ · core · conjugator` with `core` cyclically
/// reduced.
pub fn cyclic_reduce(w: &Word) -> (Word, Word) {
    let n = w.len();
    let mut k = 0;
    while 2 * k + 1 < n && w.0[k] == w.0[n - 1 - k].inv() {
        k += 1;
    }
    let core = Word(w.0[k..n - k].to_vec());
    let conjugator = Word(w.0[n - k..].to_vec());
    (core, conjugator)
}

/// Finds `x` with `x⁻¹ u x = v` in the free group, if one exists.
///
/// Among the rotations of the cyclic core of `u` matching that of `v`, the
/// least rotation index is used.
pub fn free_conjugator(u: &Word, v: &Word) -> Option<Word> {
    let (ku, cu) = cyclic_reduce(u);
    let (kv, cv) = cyclic_reduce(v);
    if ku.len() != kv.len() {
        return None;
    }
    let n = ku.len();
    if n == 0 {
        return Some(Word::empty());
    }
    for i in 0..n {
        // kv == ku rotated by i means kv = s⁻¹ ku s with s = ku[..i].
        if ku.0[i..] == kv.0[..n - i] && ku.0[..i] == kv.0[n - i..] {
            let s = ku.prefix(i);
            // u = cu⁻¹ ku cu, v = cv⁻¹ kv cv, so x = cu⁻¹ s cv.
            return Some(Word::product([&cu.inverse(), &s, &cv]));
        }
    }
    None
}

/// `root^exponent == word` with `root` not a proper power.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootDecomposition {
    pub root: Word,
    pub exponent: u32,
}

/// Primitive root of a nonempty word. The centralizer of `w` in the free
/// group is the cyclic group generated by the root.
pub fn primitive_root(w: &Word) -> Result<RootDecomposition, crate::error::CoreError> {
    if w.is_empty() {
        return Err(crate::error::CoreError::EmptyWord("primitive_root"));
    }
    let (core, conj) = cyclic_reduce(w);
    let n = core.len();
    let period = (1..=n)
        .filter(|d| n % d == 0)
        .find(|&d| (d..n).all(|i| core.0[i] == core.0[i - d]))
        .unwrap_or(n);
    let root = core.prefix(period).conjugate_by(&conj);
    Ok(RootDecomposition { root, exponent: (n / period) as u32 })
}

/// True iff `w = z^e` for some `z` and `e >= 2`.
pub fn is_proper_power(w: &Word) -> Result<bool, crate::error::CoreError> {
    if w.is_empty() {
        return Err(crate::error::CoreError::EmptyWord("is_proper_power"));
    }
    Ok(primitive_root(w)?.exponent >= 2)
}

/// All letters over `gens` in letter order.
pub fn alphabet_letters(gens: &[u8]) -> Vec<Letter> {
    let mut gs = gens.to_vec();
    gs.sort_unstable();
    gs.iter()
        .flat_map(|&g| [Letter::new(g), Letter::new(g).inv()])
        .collect()
}

/// Reduced words of exactly `len` letters over `gens`, in shortlex order.
pub fn reduced_words(gens: &[u8], len: usize) -> Vec<Word> {
    let letters = alphabet_letters(gens);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(letters: &[Letter], len: usize, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if cur.len() == len {
            out.push(Word(cur.clone()));
            return;
        }
        for &l in letters {
            if cur.last() == Some(&l.inv()) {
                continue;
            }
            cur.push(l);
            rec(letters, len, cur, out);
            cur.pop();
        }
    }
    rec(&letters, len, &mut cur, &mut out);
    out
}

/// Reduced words of length at most `radius`, shortlex order.
pub fn ball(gens: &[u8], radius: usize) -> Vec<Word> {
    (0..=radius).flat_map(|n| reduced_words(gens, n)).collect()
}

/// Number of reduced words of length at most `radius` over `k` generators.
pub fn ball_size(k: usize, radius: usize) -> u128 {
    if k == 0 {
        return 1;
    }
    let mut total: u128 = 1;
    let mut layer: u128 = 2 * k as u128;
    for _ in 0..radius {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(2 * k as u128 - 1);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(w("aA"), Word::empty());
        assert_eq!(w("abBA"), Word::empty());
        assert_eq!(w("abAb").to_string(), "abAb");
        assert_eq!(w("1").to_string(), "1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("a1b".parse::<Word>(), Err(WordParseError::BadChar { column: 2, .. })));
        assert!(matches!("".parse::<Word>(), Err(WordParseError::Empty)));
    }

    #[test]
    fn cyclic_reduction_examples() {
        assert_eq!(cyclic_reduce(&w("aba")), (w("aba"), Word::empty()));
        let (core, c) = cyclic_reduce(&w("Aba"));
        assert_eq!((core.clone(), c.clone()), (w("b"), w("a")));
        assert_eq!(core.conjugate_by(&c), w("Aba"));
        assert_eq!(cyclic_reduce(&Word::empty()), (Word::empty(), Word::empty()));
        let (core, c) = cyclic_reduce(&w("a"));
        assert_eq!((core, c), (w("a"), Word::empty()));
    }

    #[test]
    fn conjugator_examples() {
        let x = free_conjugator(&w("ab"), &w("ba")).unwrap();
        assert_eq!(x, w("a"));
        assert_eq!(w("ab").conjugate_by(&x), w("ba"));
        assert_eq!(free_conjugator(&w("a"), &w("b")), None);
        assert_eq!(free_conjugator(&w("a"), &w("a")), Some(Word::empty()));
        let u = w("cabbC");
        let v = u.conjugate_by(&w("aBc"));
        let x = free_conjugator(&u, &v).unwrap();
        assert_eq!(u.conjugate_by(&x), v);
    }

    #[test]
    fn root_examples() {
        assert_eq!(primitive_root(&w("abab")).unwrap(), RootDecomposition { root: w("ab"), exponent: 2 });
        assert_eq!(primitive_root(&w("a")).unwrap(), RootDecomposition { root: w("a"), exponent: 1 });
        assert_eq!(primitive_root(&w("abAB")).unwrap().exponent, 1);
        let r = primitive_root(&w("Babababb")).unwrap();
        assert_eq!(r.exponent, 3);
        assert_eq!(r.root, w("Babb"));
        assert_eq!(r.root.pow(3), w("Babababb"));
        assert!(primitive_root(&Word::empty()).is_err());
    }

    #[test]
    fn proper_power_examples() {
        assert!(is_proper_power(&w("aa")).unwrap());
        assert!(!is_proper_power(&w("ab")).unwrap());
        assert!(is_proper_power(&w("bababa")).unwrap());
        assert!(is_proper_power(&Word::empty()).is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(w("Aba").pow(3), w("Abbba"));
        assert_eq!(w("ab").pow(-2), w("BABA"));
        assert_eq!(w("ab").pow(0), Word::empty());
    }

    #[test]
    fn ball_counts() {
        for r in 0..5 {
            assert_eq!(ball(b"ab", r).len() as u128, ball_size(2, r));
        }
        let b = ball(b"ab", 2);
        assert_eq!(b[1], w("a"));
        assert_eq!(b[2], w("A"));
        assert_eq!(b[5], w("aa"));
    }
}
