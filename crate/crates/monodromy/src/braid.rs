//! Braid words and the Artin action on a free group.
//!
//! Strand positions are `1..=N`.  The letter `σ_i` acts on the free group
//! `F(x_1, …, x_N)` by `x_i ↦ x_i x_{i+1} x_i⁻¹`, `x_{i+1} ↦ x_i`; the action
//! is faithful, so two braids are equal exactly when they induce the same
//! automorphism.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest free word an automorphism image may reach.
pub const WORD_LENGTH_CAP: usize = 1_000_000;

/// A word in the Artin generators; letter `±i` is `σ_i^{±1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: usize,
    #[serde(rename = "word")]
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::IndexOutOfRange {
                    index: l as i64,
                    strands,
                });
            }
        }
        Ok(Self { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        Self {
            strands,
            letters: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `self · other` (do `self` first).
    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::IndexMismatch {
                expected: self.strands,
                found: other.strands,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// `perm[i]` is the final position (zero-based) of the strand starting at
    /// position `i`.
    pub fn permutation(&self) -> Vec<usize> {
        // at_position[p] = strand currently at p
        let mut at_position: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            at_position.swap(i, i + 1);
        }
        let mut perm = vec![0; self.strands];
        for (p, &s) in at_position.iter().enumerate() {
            perm[s] = p;
        }
        perm
    }

    /// Whether every strand returns to its start position.
    pub fn is_pure(&self) -> bool {
        self.permutation().iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// `compose(a, b) = a · b`.
pub fn compose(a: &BraidWord, b: &BraidWord) -> Result<BraidWord> {
    a.compose(b)
}

/// `invert(w) = w⁻¹`.
pub fn invert(w: &BraidWord) -> BraidWord {
    w.inverse()
}

/// `permutation_of(w)`; see [`BraidWord::permutation`].
pub fn permutation_of(w: &BraidWord) -> Vec<usize> {
    w.permutation()
}

/// A free-group word; letter `±g` is `x_g^{±1}` with `g ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FreeWord {
    pub letters: Vec<i32>,
}

impl FreeWord {
    /// Freely reduced word from arbitrary letters.
    pub fn new(letters: Vec<i32>) -> Self {
        Self {
            letters: free_reduce(&letters),
        }
    }

    pub fn identity() -> Self {
        Self {
            letters: Vec::new(),
        }
    }

    pub fn generator(g: i32) -> Self {
        Self { letters: vec![g] }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|g| -g).collect(),
        }
    }

    /// Reduced product `self · other`.
    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.letters.clone();
        for &g in &other.letters {
            if out.last() == Some(&-g) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        FreeWord { letters: out }
    }

    /// Conjugate-reduced form: strips matching letters from both ends.
    pub fn cyclically_reduced(&self) -> FreeWord {
        let w = &self.letters;
        let (mut a, mut b) = (0, w.len());
        while b - a >= 2 && w[a] == -w[b - 1] {
            a += 1;
            b -= 1;
        }
        FreeWord {
            letters: w[a..b].to_vec(),
        }
    }

    /// Largest generator index used.
    pub fn max_generator(&self) -> usize {
        self.letters
            .iter()
            .map(|g| g.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }
}

/// Stack-based free reduction.
pub fn free_reduce(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &g in letters {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

/// An endomorphism of the free group given by the images of its generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeAutomorphism {
    pub images: Vec<FreeWord>,
}

impl FreeAutomorphism {
    pub fn identity(rank: usize) -> Self {
        Self {
            images: (1..=rank as i32).map(FreeWord::generator).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// Substitutes the images into `word`.
    pub fn apply(&self, word: &FreeWord) -> Result<FreeWord> {
        let mut out = FreeWord::identity();
        for &g in &word.letters {
            let idx = g.unsigned_abs() as usize;
            if idx == 0 || idx > self.rank() {
                return Err(Error::IndexOutOfRange {
                    index: g as i64,
                    strands: self.rank(),
                });
            }
            let img = &self.images[idx - 1];
            out = if g > 0 {
                out.mul(img)
            } else {
                out.mul(&img.inverse())
            };
            if out.len() > WORD_LENGTH_CAP {
                return Err(Error::LengthCap {
                    cap: WORD_LENGTH_CAP,
                });
            }
        }
        Ok(out)
    }

    /// Integer matrix of the abelianized map, `row g = exponent sums of φ(x_g)`.
    pub fn abelianized(&self) -> Vec<Vec<i64>> {
        self.images
            .iter()
            .map(|w| {
                let mut row = vec![0i64; self.rank()];
                for &g in &w.letters {
                    row[g.unsigned_abs() as usize - 1] += g.signum() as i64;
                }
                row
            })
            .collect()
    }
}

fn check_len(w: &FreeWord) -> Result<()> {
    if w.len() > WORD_LENGTH_CAP {
        Err(Error::LengthCap {
            cap: WORD_LENGTH_CAP,
        })
    } else {
        Ok(())
    }
}

/// The automorphism `w ↦ artin_action(braid, w)`.
///
/// Letters are applied left to right as substitutions, so the result is
/// `σ_last ∘ … ∘ σ_first`.  It is assembled by right-composing the letters
/// in reverse order, which only touches two images per letter.
pub fn automorphism_of(braid: &BraidWord) -> Result<FreeAutomorphism> {
    let mut a = FreeAutomorphism::identity(braid.strands);
    for &l in braid.letters.iter().rev() {
        let i = l.unsigned_abs() as usize - 1;
        let (ai, aj) = (a.images[i].clone(), a.images[i + 1].clone());
        if l > 0 {
            // (A∘σ_i)(x_i) = A(x_i) A(x_{i+1}) A(x_i)⁻¹, (A∘σ_i)(x_{i+1}) = A(x_i)
            a.images[i] = ai.mul(&aj).mul(&ai.inverse());
            a.images[i + 1] = ai;
        } else {
            // (A∘σ_i⁻¹)(x_i) = A(x_{i+1}), (A∘σ_i⁻¹)(x_{i+1}) = A(x_{i+1})⁻¹ A(x_i) A(x_{i+1})
            a.images[i] = aj.clone();
            a.images[i + 1] = aj.inverse().mul(&ai).mul(&aj);
        }
        check_len(&a.images[i])?;
        check_len(&a.images[i + 1])?;
    }
    Ok(a)
}

/// Action of `braid` on `word`: substitute letter by letter, left to right.
pub fn artin_action(braid: &BraidWord, word: &FreeWord) -> Result<FreeWord> {
    if word.max_generator() > braid.strands {
        return Err(Error::IndexMismatch {
            expected: braid.strands,
            found: word.max_generator(),
        });
    }
    automorphism_of(braid)?.apply(word)
}

/// Equality in the braid group, decided by the Artin action.
pub fn braids_equal(a: &BraidWord, b: &BraidWord) -> Result<bool> {
    if a.strands != b.strands {
        return Err(Error::IndexMismatch {
            expected: a.strands,
            found: b.strands,
        });
    }
    Ok(automorphism_of(a)? == automorphism_of(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bw(n: usize, l: &[i32]) -> BraidWord {
        BraidWord::new(n, l.to_vec()).unwrap()
    }

    /// Independent oracle: apply one letter at a time as a substitution.
    fn substitute_letter(letter: i32, w: &[i32]) -> Vec<i32> {
        let i = letter.unsigned_abs() as i32;
        let mut out = Vec::new();
        for &g in w {
            let img: Vec<i32> = match (letter > 0, g.abs()) {
                (true, x) if x == i => vec![i, i + 1, -i],
                (true, x) if x == i + 1 => vec![i],
                (false, x) if x == i => vec![i + 1],
                (false, x) if x == i + 1 => vec![-(i + 1), i, i + 1],
                (_, x) => vec![x],
            };
            if g > 0 {
                out.extend(img);
            } else {
                out.extend(img.iter().rev().map(|x| -x));
            }
        }
        free_reduce(&out)
    }

    fn oracle_action(braid: &[i32], w: &[i32]) -> Vec<i32> {
        braid
            .iter()
            .fold(free_reduce(w), |acc, &l| substitute_letter(l, &acc))
    }

    #[test]
    fn sigma_one_on_generators() {
        let s = bw(2, &[1]);
        assert_eq!(
            artin_action(&s, &FreeWord::generator(1)).unwrap().letters,
            vec![1, 2, -1]
        );
        assert_eq!(
            artin_action(&s, &FreeWord::generator(2)).unwrap().letters,
            vec![1]
        );
        let e = BraidWord::identity(3);
        let w = FreeWord::new(vec![1, -3, 2]);
        assert_eq!(artin_action(&e, &w).unwrap(), w);
    }

    #[test]
    fn full_twist_on_two_strands() {
        let a = automorphism_of(&bw(2, &[1, 1])).unwrap();
        assert_eq!(a.images[0].letters, vec![1, 2, 1, -2, -1]);
        assert_eq!(a.images[1].letters, vec![1, 2, -1]);
        let boundary = FreeWord::new(vec![1, 2]);
        assert_eq!(a.apply(&boundary).unwrap(), boundary);
    }

    #[test]
    fn braid_relations_hold() {
        assert!(braids_equal(&bw(3, &[1, 2, 1]), &bw(3, &[2, 1, 2])).unwrap());
        assert!(braids_equal(&bw(5, &[1, 3, 3, -1]), &bw(5, &[3, 3])).unwrap());
        assert!(!braids_equal(&bw(2, &[1]), &bw(2, &[-1])).unwrap());
        assert!(braids_equal(&bw(4, &[1, 3]), &bw(4, &[3, 1])).unwrap());
        assert!(!braids_equal(&bw(3, &[1, 2]), &bw(3, &[2, 1])).unwrap());
    }

    #[test]
    fn permutations() {
        assert_eq!(bw(3, &[1]).permutation(), vec![1, 0, 2]);
        assert_eq!(bw(3, &[1, 2]).permutation(), vec![2, 0, 1]);
        assert!(bw(3, &[1, 1, -2, -2]).is_pure());
    }

    #[test]
    fn mismatched_sizes_are_errors() {
        assert!(matches!(
            bw(3, &[1]).compose(&bw(4, &[1])),
            Err(Error::IndexMismatch { .. })
        ));
        assert!(artin_action(&bw(2, &[1]), &FreeWord::generator(3)).is_err());
        assert!(BraidWord::new(3, vec![3]).is_err());
        assert!(BraidWord::new(3, vec![0]).is_err());
    }

    #[test]
    fn json_format() {
        let s = serde_json::to_string(&bw(3, &[1, -2])).unwrap();
        assert_eq!(s, r#"{"strands":3,"word":[1,-2]}"#);
        assert_eq!(
            serde_json::to_string(&FreeWord::new(vec![2, -1])).unwrap(),
            "[2,-1]"
        );
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(
            FreeWord::new(vec![1, 2, 3, -1])
                .cyclically_reduced()
                .letters,
            vec![2, 3]
        );
        assert_eq!(
            FreeWord::new(vec![1, -1]).cyclically_reduced().letters,
            Vec::<i32>::new()
        );
    }

    fn braid_strategy() -> impl Strategy<Value = (usize, Vec<i32>)> {
        (3usize..=11).prop_flat_map(|n| {
            let letter = (1..n as i32).prop_flat_map(|i| prop_oneof![Just(i), Just(-i)]);
            (Just(n), prop::collection::vec(letter, 0..40))
        })
    }

    /// Applies one random braid-group move, returning an equal word.
    fn apply_move(n: usize, w: &[i32], pos: usize, kind: u8, gen: i32) -> Vec<i32> {
        let mut w = w.to_vec();
        let pos = if w.is_empty() { 0 } else { pos % (w.len() + 1) };
        let i = 1 + gen.rem_euclid(n as i32 - 1);
        match kind % 4 {
            0 => {
                // insert σ σ⁻¹
                w.splice(pos..pos, [i, -i]);
            }
            1 if i + 1 < n as i32 => {
                // replace by a braid relation pair: insert (σ_i σ_{i+1} σ_i)(σ_{i+1} σ_i σ_{i+1})⁻¹
                w.splice(pos..pos, [i, i + 1, i, -(i + 1), -i, -(i + 1)]);
            }
            2 if pos + 1 < w.len() => {
                // commute far-apart neighbours
                if (w[pos].abs() - w[pos + 1].abs()).abs() >= 2 {
                    w.swap(pos, pos + 1);
                }
            }
            _ => {
                // conjugate a far-commuting square: σ_j σ_i² σ_j⁻¹ = σ_i²
                let j = 1 + (i + 1).rem_euclid(n as i32 - 1);
                if (i - j).abs() >= 2 {
                    w.splice(pos..pos, [j, i, i, -j, -i, -i]);
                }
            }
        }
        w
    }

    proptest! {
        #[test]
        fn action_matches_letter_by_letter_oracle((n, w) in braid_strategy(), x in prop::collection::vec(-3i32..=3, 0..6)) {
            let x: Vec<i32> = x.into_iter().filter(|&g| g != 0).collect();
            let braid = BraidWord::new(n, w.clone()).unwrap();
            let got = artin_action(&braid, &FreeWord::new(x.clone())).unwrap();
            prop_assert_eq!(got.letters, oracle_action(&w, &x));
        }

        #[test]
        fn action_respects_composition((n, a) in braid_strategy(), b_seed in prop::collection::vec(any::<i32>(), 0..8)) {
            let b: Vec<i32> = b_seed.iter().map(|s| {
                let i = 1 + s.rem_euclid(n as i32 - 1);
                if s % 2 == 0 { i } else { -i }
            }).collect();
            let (ba, bb) = (bw(n, &a), bw(n, &b));
            let ab = ba.compose(&bb).unwrap();
            for g in 1..=n as i32 {
                let x = FreeWord::generator(g);
                // images of long random words can outgrow the length cap
                let lhs = artin_action(&ab, &x);
                prop_assume!(!matches!(lhs, Err(Error::LengthCap { .. })));
                let rhs = artin_action(&bb, &artin_action(&ba, &x).unwrap()).unwrap();
                prop_assert_eq!(lhs.unwrap(), rhs);
            }
        }

        #[test]
        fn related_words_compare_equal((n, w) in braid_strategy(), moves in prop::collection::vec((any::<usize>(), any::<u8>(), any::<i32>()), 1..6)) {
            let mut v = w.clone();
            for (pos, kind, gen) in moves {
                v = apply_move(n, &v, pos, kind, gen);
            }
            prop_assert!(braids_equal(&bw(n, &w), &bw(n, &v)).unwrap());
        }

        #[test]
        fn perturbed_words_compare_unequal((n, w) in braid_strategy(), pos in any::<usize>(), gen in any::<i32>()) {
            // inserting one extra generator changes the permutation parity
            let mut v = w.clone();
            let pos = pos % (v.len() + 1);
            v.insert(pos, 1 + gen.rem_euclid(n as i32 - 1));
            prop_assert!(!braids_equal(&bw(n, &w), &bw(n, &v)).unwrap());
        }

        #[test]
        fn inverse_cancels((n, w) in braid_strategy()) {
            let b = bw(n, &w);
            prop_assert!(braids_equal(&b.compose(&b.inverse()).unwrap(), &BraidWord::identity(n)).unwrap());
        }

        #[test]
        fn free_reduction_is_confluent(w in prop::collection::vec(prop_oneof![-4i32..=-1, 1i32..=4], 0..60), seed in any::<u64>()) {
            // cancel adjacent inverse pairs in a pseudo-random order until stuck
            let mut v = w.clone();
            let mut state = seed | 1;
            loop {
                let spots: Vec<usize> = (0..v.len().saturating_sub(1)).filter(|&i| v[i] == -v[i + 1]).collect();
                if spots.is_empty() { break; }
                state ^= state << 13; state ^= state >> 7; state ^= state << 17;
                let i = spots[(state % spots.len() as u64) as usize];
                v.drain(i..i + 2);
            }
            prop_assert_eq!(v, free_reduce(&w));
        }

        #[test]
        fn abelianized_braid_is_a_permutation_matrix((n, w) in braid_strategy()) {
            let m = automorphism_of(&bw(n, &w)).unwrap().abelianized();
            for row in &m {
                prop_assert_eq!(row.iter().filter(|&&x| x == 1).count(), 1);
                prop_assert_eq!(row.iter().filter(|&&x| x != 0).count(), 1);
            }
        }
    }
}
