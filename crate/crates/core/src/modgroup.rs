//! Words in the modular group `⟨a, b | a² = b³ = 1⟩` and in its free
//! subgroup of index six generated by `g₁ = bab²a` and `g₂ = b²aba`.
//!
//! Word literals use the alphabet `a`, `b`, `B` (`B` = b²). Parsing also
//! accepts `b^-1` and `b⁻¹`, which are rewritten to `B`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// One syllable of the free-product normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Syllable {
    A,
    B,
    /// `b²`, equal to `b⁻¹`.
    B2,
}

impl Syllable {
    fn b_exponent(self) -> u8 {
        match self {
            Syllable::A => 0,
            Syllable::B => 1,
            Syllable::B2 => 2,
        }
    }

    pub fn inverse(self) -> Syllable {
        match self {
            Syllable::A => Syllable::A,
            Syllable::B => Syllable::B2,
            Syllable::B2 => Syllable::B,
        }
    }

    fn letter(self) -> char {
        match self {
            Syllable::A => 'a',
            Syllable::B => 'b',
            Syllable::B2 => 'B',
        }
    }
}

/// An element of PSL₂(ℤ) in normal form: `a` and `b`-syllables alternate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModWord {
    syllables: Vec<Syllable>,
}

impl ModWord {
    pub fn identity() -> Self {
        ModWord::default()
    }

    /// Reduces an arbitrary sequence of syllables to normal form.
    pub fn normalize<I: IntoIterator<Item = Syllable>>(raw: I) -> Self {
        let mut out: Vec<Syllable> = Vec::new();
        for s in raw {
            push_reduced(&mut out, s);
        }
        ModWord { syllables: out }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn mul(&self, other: &ModWord) -> ModWord {
        let mut out = self.syllables.clone();
        for &s in &other.syllables {
            push_reduced(&mut out, s);
        }
        ModWord { syllables: out }
    }

    pub fn inverse(&self) -> ModWord {
        ModWord {
            syllables: self.syllables.iter().rev().map(|s| s.inverse()).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> ModWord {
        (0..n).fold(ModWord::identity(), |acc, _| acc.mul(self))
    }

    /// Exponent sums `(#a mod 2, Σ b-exponents mod 3)`.
    pub fn parity_abelianization(&self) -> (u8, u8) {
        let mut a = 0u8;
        let mut b = 0u8;
        for s in &self.syllables {
            match s {
                Syllable::A => a ^= 1,
                other => b = (b + other.b_exponent()) % 3,
            }
        }
        (a, b)
    }

    /// Membership in the index-two subgroup Γ₂.
    pub fn in_gamma2(&self) -> bool {
        self.parity_abelianization().0 == 0
    }

    /// Membership in Γ₆, the kernel of the map onto ℤ₂ × ℤ₃.
    pub fn in_gamma6(&self) -> bool {
        self.parity_abelianization() == (0, 0)
    }

    /// Cyclically reduced conjugate.
    pub fn cyclic_reduction(&self) -> ModWord {
        let mut s = self.syllables.clone();
        loop {
            if s.len() < 2 {
                break;
            }
            let (first, last) = (s[0], s[s.len() - 1]);
            let merge = (first == Syllable::A) == (last == Syllable::A);
            if !merge {
                break;
            }
            // conjugate by the last syllable: last · w · last⁻¹
            let mut rotated = vec![last];
            rotated.extend_from_slice(&s[..s.len() - 1]);
            let w = ModWord::normalize(rotated);
            if w.len() >= s.len() {
                break;
            }
            s = w.syllables;
        }
        ModWord { syllables: s }
    }
}

fn push_reduced(out: &mut Vec<Syllable>, s: Syllable) {
    match (out.last().copied(), s) {
        (Some(Syllable::A), Syllable::A) => {
            out.pop();
        }
        (Some(prev), next) if prev != Syllable::A && next != Syllable::A => {
            out.pop();
            match (prev.b_exponent() + next.b_exponent()) % 3 {
                1 => out.push(Syllable::B),
                2 => out.push(Syllable::B2),
                _ => {}
            }
        }
        _ => out.push(s),
    }
}

impl fmt::Display for ModWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for s in &self.syllables {
            write!(f, "{}", s.letter())?;
        }
        Ok(())
    }
}

impl FromStr for ModWord {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text == "1" || text.is_empty() {
            return Ok(ModWord::identity());
        }
        let chars: Vec<char> = text.chars().collect();
        let mut raw = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let rest: String = chars[i + 1..].iter().collect();
            match c {
                'a' => raw.push(Syllable::A),
                'B' => raw.push(Syllable::B2),
                'b' if rest.starts_with("^-1") => {
                    raw.push(Syllable::B2);
                    i += 3;
                }
                'b' if rest.starts_with('⁻') && rest.chars().nth(1) == Some('¹') => {
                    raw.push(Syllable::B2);
                    i += 2;
                }
                'b' if rest.starts_with('²') => {
                    raw.push(Syllable::B2);
                    i += 1;
                }
                'b' => raw.push(Syllable::B),
                other => {
                    return Err(GeomError::InvalidArgument(format!(
                        "unexpected character {other:?} in word {s:?}"
                    )))
                }
            }
            i += 1;
        }
        Ok(ModWord::normalize(raw))
    }
}

/// Generators of the free subgroup Γ₆, in enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum F2Letter {
    G1,
    G1Inv,
    G2,
    G2Inv,
}

impl F2Letter {
    pub const ALL: [F2Letter; 4] = [F2Letter::G1, F2Letter::G1Inv, F2Letter::G2, F2Letter::G2Inv];

    pub fn inverse(self) -> F2Letter {
        match self {
            F2Letter::G1 => F2Letter::G1Inv,
            F2Letter::G1Inv => F2Letter::G1,
            F2Letter::G2 => F2Letter::G2Inv,
            F2Letter::G2Inv => F2Letter::G2,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// `g₁ = bab²a`, `g₂ = b²aba` and their inverses as modular words.
    pub fn to_mod(self) -> ModWord {
        use Syllable::*;
        let g = match self {
            F2Letter::G1 => vec![B, A, B2, A],
            F2Letter::G1Inv => vec![A, B, A, B2],
            F2Letter::G2 => vec![B2, A, B, A],
            F2Letter::G2Inv => vec![A, B2, A, B],
        };
        ModWord::normalize(g)
    }

    fn symbol(self) -> &'static str {
        match self {
            F2Letter::G1 => "x",
            F2Letter::G1Inv => "X",
            F2Letter::G2 => "y",
            F2Letter::G2Inv => "Y",
        }
    }
}

/// A reduced word in the free generators of Γ₆.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct F2Word {
    letters: Vec<F2Letter>,
}

impl F2Word {
    pub fn identity() -> Self {
        F2Word::default()
    }

    pub fn from_letters<I: IntoIterator<Item = F2Letter>>(letters: I) -> Self {
        let mut out: Vec<F2Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        F2Word { letters: out }
    }

    pub fn letters(&self) -> &[F2Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &F2Word) -> F2Word {
        F2Word::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> F2Word {
        F2Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pop(&mut self) -> Option<F2Letter> {
        self.letters.pop()
    }

    pub fn push(&mut self, l: F2Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }
}

impl fmt::Display for F2Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

/// The substitution homomorphism Γ₆ → PSL₂(ℤ).
pub fn f2_to_mod(w: &F2Word) -> ModWord {
    ModWord::normalize(w.letters.iter().flat_map(|l| l.to_mod().syllables))
}

/// Number of reduced words of length `k` in a free group of rank two.
pub fn reduced_word_count(k: usize) -> usize {
    if k == 0 {
        1
    } else {
        4 * 3usize.pow(k as u32 - 1)
    }
}

/// Streams every reduced word of length `1..=max_len`, by length and then
/// lexicographically in the order `g₁, g₁⁻¹, g₂, g₂⁻¹`.
pub fn enumerate_f2(max_len: usize) -> F2Enumeration {
    F2Enumeration {
        max_len,
        current: Vec::new(),
        started: false,
    }
}

pub struct F2Enumeration {
    max_len: usize,
    current: Vec<usize>,
    started: bool,
}

impl F2Enumeration {
    fn first_of_length(k: usize) -> Vec<usize> {
        // g1 g1 g1 … is reduced.
        vec![0; k]
    }

    fn valid_from(word: &[usize], pos: usize) -> bool {
        (pos.max(1)..word.len())
            .all(|i| F2Letter::ALL[word[i]].inverse() != F2Letter::ALL[word[i - 1]])
    }

    /// Next reduced word of the same length, odometer style.
    fn advance(word: &mut [usize]) -> bool {
        let n = word.len();
        let mut pos = n;
        loop {
            if pos == 0 {
                return false;
            }
            pos -= 1;
            while word[pos] < 3 {
                word[pos] += 1;
                if pos == 0 || F2Letter::ALL[word[pos]].inverse() != F2Letter::ALL[word[pos - 1]] {
                    // Fill the tail with the smallest reduced continuation.
                    for i in pos + 1..n {
                        // after g₁⁻¹ the smallest admissible letter is g₁⁻¹ itself
                        word[i] = if word[i - 1] == 1 { 1 } else { 0 };
                    }
                    debug_assert!(Self::valid_from(word, 0));
                    return true;
                }
            }
        }
    }
}

impl Iterator for F2Enumeration {
    type Item = F2Word;

    fn next(&mut self) -> Option<F2Word> {
        if !self.started {
            self.started = true;
            if self.max_len == 0 {
                return None;
            }
            self.current = Self::first_of_length(1);
        } else if !Self::advance(&mut self.current) {
            let k = self.current.len() + 1;
            if k > self.max_len {
                return None;
            }
            self.current = Self::first_of_length(k);
        }
        Some(F2Word {
            letters: self.current.iter().map(|&i| F2Letter::ALL[i]).collect(),
        })
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A uniformly random reduced word of exactly `len` letters.
pub fn random_reduced_word(len: usize, seed: u64, stream: u64) -> F2Word {
    let mut rng = rng_for(seed, stream);
    random_reduced_word_with(&mut rng, len)
}

pub(crate) fn random_reduced_word_with<R: Rng>(rng: &mut R, len: usize) -> F2Word {
    let mut letters: Vec<F2Letter> = Vec::with_capacity(len);
    for _ in 0..len {
        let l = match letters.last() {
            None => F2Letter::ALL[rng.random_range(0..4)],
            Some(prev) => {
                let forbidden = prev.inverse();
                let choices: Vec<F2Letter> = F2Letter::ALL
                    .iter()
                    .copied()
                    .filter(|&c| c != forbidden)
                    .collect();
                choices[rng.random_range(0..3)]
            }
        };
        letters.push(l);
    }
    F2Word { letters }
}

/// A window `g_0, …, g_len` of a discrete geodesic through the identity in the
/// Cayley graph of Γ₆: consecutive elements differ by one free generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicWindow {
    /// Left translation applied to every element.
    pub offset: F2Word,
    /// `g_{n+1} = g_n · steps[n]`.
    pub steps: Vec<F2Letter>,
}

impl GeodesicWindow {
    pub fn from_steps(steps: Vec<F2Letter>) -> Result<Self> {
        for pair in steps.windows(2) {
            if pair[1] == pair[0].inverse() {
                return Err(GeomError::InvalidArgument(
                    "geodesic steps must form a reduced word".into(),
                ));
            }
        }
        Ok(GeodesicWindow {
            offset: F2Word::identity(),
            steps,
        })
    }

    /// The window `g^n`, `n = 0..=len`.
    pub fn power(letter: F2Letter, len: usize) -> Self {
        GeodesicWindow {
            offset: F2Word::identity(),
            steps: vec![letter; len],
        }
    }

    pub fn translated(&self, w: &F2Word) -> Self {
        GeodesicWindow {
            offset: w.mul(&self.offset),
            steps: self.steps.clone(),
        }
    }

    /// Number of steps; the window has `len() + 1` elements.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn elements(&self) -> Vec<F2Word> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut g = self.offset.clone();
        out.push(g.clone());
        for &s in &self.steps {
            g.push(s);
            out.push(g.clone());
        }
        out
    }
}

/// Prefixes `w_0 = 1, w_1, …, w_len` of one seeded random reduced word.
pub fn random_f2_geodesic(len: usize, seed: u64) -> GeodesicWindow {
    let w = random_reduced_word(len, seed, 0);
    GeodesicWindow {
        offset: F2Word::identity(),
        steps: w.letters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ModWord {
        s.parse().unwrap()
    }

    #[test]
    fn relators_reduce() {
        assert!(w("aa").is_identity());
        assert!(w("bbb").is_identity());
        assert_eq!(w("bbaaB"), w("b"));
        assert_eq!(w("bbaaB").to_string(), "b");
        assert_eq!(w("b^-1"), w("B"));
        assert_eq!(w("b⁻¹a"), w("Ba"));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("abc".parse::<ModWord>().is_err());
    }

    #[test]
    fn parity_examples() {
        assert_eq!(w("a").parity_abelianization(), (1, 0));
        assert_eq!(w("baba").parity_abelianization(), (0, 2));
        assert_eq!(w("baBa").parity_abelianization(), (0, 0));
        assert!(w("baBa").in_gamma6());
        assert!(w("baba").in_gamma2());
        assert!(!w("a").in_gamma2());
    }

    #[test]
    fn f2_substitution() {
        assert!(f2_to_mod(&F2Word::identity()).is_identity());
        let g1 = F2Word::from_letters([F2Letter::G1]);
        let g1g1inv = F2Word::from_letters([F2Letter::G1, F2Letter::G1Inv]);
        assert!(g1g1inv.is_empty());
        assert!(f2_to_mod(&g1.mul(&g1.inverse())).is_identity());
        let g1g2 = F2Word::from_letters([F2Letter::G1, F2Letter::G2]);
        assert_eq!(f2_to_mod(&g1g2), w("baBaBaba"));
        for l in F2Letter::ALL {
            assert!(l.to_mod().mul(&l.inverse().to_mod()).is_identity());
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_f2(0).count(), 0);
        assert_eq!(enumerate_f2(1).count(), 4);
        assert_eq!(enumerate_f2(3).count(), 52);
        for k in 1..=8 {
            let n = enumerate_f2(k).filter(|w| w.len() == k).count();
            assert_eq!(n, reduced_word_count(k), "length {k}");
        }
    }

    #[test]
    fn enumeration_is_ordered_reduced_and_distinct() {
        let words: Vec<F2Word> = enumerate_f2(5).collect();
        for pair in words.windows(2) {
            assert!(
                (pair[0].len(), &pair[0].letters) < (pair[1].len(), &pair[1].letters),
                "{} then {}",
                pair[0],
                pair[1]
            );
        }
        for word in &words {
            assert_eq!(
                F2Word::from_letters(word.letters.iter().copied()).len(),
                word.len()
            );
        }
    }

    #[test]
    fn geodesic_prefix_lengths() {
        let g = random_f2_geodesic(12, 7);
        for (n, e) in g.elements().iter().enumerate() {
            assert_eq!(e.len(), n);
        }
        assert_eq!(random_f2_geodesic(12, 7), g);
        assert_ne!(random_f2_geodesic(12, 8), g);
    }

    #[test]
    fn cyclic_reduction_examples() {
        assert_eq!(w("aba").cyclic_reduction(), w("b"));
        assert_eq!(w("babab").cyclic_reduction(), w("Baba"));
        assert_eq!(w("abababa").cyclic_reduction(), w("Baba"));
        assert_eq!(w("baba").cyclic_reduction(), w("baba"));
    }
}
