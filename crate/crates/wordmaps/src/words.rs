//! Free-group words: parsing, evaluation, exact images, and normalization.
//!
//! Two-letter words over a class-2 group normalize to the canonical form
//! x^m [x, y^n]. The pipeline: free-group automorphisms reduce the
//! exponent sums to (g, 0) and split off the power x^g; the zero-sum
//! remainder collects into a product of commutators; the product folds
//! into a single [x, y^n]; and the exponents reduce mod the group's
//! invariants (e, e', f). Every step preserves the word image, and the
//! test suites hold each step against exhaustive enumeration.

use rayon::prelude::*;
use serde::Serialize;

use crate::group::{gcd, Element, ElementSet, Group};
use crate::{Error, Result};

/// Default cap on word-map evaluations per image computation.
pub const DEFAULT_EVAL_BUDGET: u64 = 1 << 32;

/// Seed for the pseudo-random word sampler used by the soundness suites.
pub const DEFAULT_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

/// Cap on total syllable weight during automorphism rewriting.
const MAX_REWRITE_WEIGHT: u64 = 1_000_000;

/// A freely reduced word: syllables (letter, nonzero exponent) with
/// adjacent letters distinct. `letters` is the arity d.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: usize,
    body: Vec<(usize, i64)>,
}

impl Word {
    pub fn empty() -> Self {
        Word {
            letters: 0,
            body: Vec::new(),
        }
    }

    /// Build from raw syllables, freely reducing.
    pub fn from_syllables(letters: usize, syllables: &[(usize, i64)]) -> Result<Self> {
        let mut body: Vec<(usize, i64)> = Vec::with_capacity(syllables.len());
        let mut max_letter = 0usize;
        for &(letter, exp) in syllables {
            max_letter = max_letter.max(letter + 1);
            push_reduced(&mut body, letter, exp);
        }
        Ok(Word {
            letters: letters.max(max_letter),
            body,
        })
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn body(&self) -> &[(usize, i64)] {
        &self.body
    }

    pub fn is_identity_word(&self) -> bool {
        self.body.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut body = self.body.clone();
        for &(letter, exp) in &other.body {
            push_reduced(&mut body, letter, exp);
        }
        Word {
            letters: self.letters.max(other.letters),
            body,
        }
    }

    pub fn inverse(&self) -> Word {
        let body = self
            .body
            .iter()
            .rev()
            .map(|&(letter, exp)| (letter, -exp))
            .collect();
        Word {
            letters: self.letters,
            body,
        }
    }

    pub fn repeat(&self, k: i64) -> Result<Word> {
        // A single syllable just scales its exponent.
        if self.body.len() == 1 {
            let (letter, exp) = self.body[0];
            let scaled = exp.checked_mul(k).ok_or_else(|| {
                Error::Unsupported("exponent overflow in word power".into())
            })?;
            return Word::from_syllables(self.letters, &[(letter, scaled)]);
        }
        let total = (self.body.len() as u64).saturating_mul(k.unsigned_abs());
        if total > MAX_REWRITE_WEIGHT {
            return Err(Error::BudgetExceeded {
                what: "word power expansion".into(),
                needed: total,
                budget: MAX_REWRITE_WEIGHT,
            });
        }
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word {
            letters: self.letters,
            body: Vec::new(),
        };
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        Ok(out)
    }

    /// Exponent sum per letter, for two-letter words.
    pub fn exponent_sums(&self) -> Result<(i64, i64)> {
        if self.letters > 2 {
            return Err(Error::Unsupported(
                "exponent sums are defined for two-letter words".into(),
            ));
        }
        let mut sums = (0i64, 0i64);
        for &(letter, exp) in &self.body {
            if letter == 0 {
                sums.0 += exp;
            } else {
                sums.1 += exp;
            }
        }
        Ok(sums)
    }

    /// Printable form; reparses to an equal word.
    pub fn print(&self) -> String {
        if self.body.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        for &(letter, exp) in &self.body {
            match letter {
                0 => out.push('x'),
                1 => out.push('y'),
                k => out.push_str(&format!("x{}", k + 1)),
            }
            if exp != 1 {
                out.push_str(&format!("^{exp}"));
            }
        }
        out
    }

    /// Substitute one letter by a two-syllable image, in the hot shapes
    /// the rewriting loop needs: target -> target * other^k.
    fn substitute_shear(&self, target: usize, other: usize, k: i64) -> Result<Word> {
        let mut body = Vec::new();
        let mut weight = 0u64;
        for &(letter, exp) in &self.body {
            if letter != target || k == 0 {
                push_reduced(&mut body, letter, exp);
                weight += exp.unsigned_abs();
            } else {
                let (steps, sign) = (exp.unsigned_abs(), exp.signum());
                weight = weight
                    .saturating_add(steps.saturating_mul(1 + k.unsigned_abs()));
                if weight > MAX_REWRITE_WEIGHT {
                    return Err(Error::BudgetExceeded {
                        what: "automorphism rewriting".into(),
                        needed: weight,
                        budget: MAX_REWRITE_WEIGHT,
                    });
                }
                for _ in 0..steps {
                    if sign > 0 {
                        push_reduced(&mut body, target, 1);
                        push_reduced(&mut body, other, k);
                    } else {
                        push_reduced(&mut body, other, -k);
                        push_reduced(&mut body, target, -1);
                    }
                }
            }
        }
        Ok(Word {
            letters: self.letters.max(2),
            body,
        })
    }

    fn swap_letters(&self) -> Word {
        let body = self
            .body
            .iter()
            .map(|&(letter, exp)| (1 - letter, exp))
            .collect();
        Word {
            letters: self.letters.max(2),
            body,
        }
    }

    fn invert_letter(&self, target: usize) -> Word {
        let body = self
            .body
            .iter()
            .map(|&(letter, exp)| {
                if letter == target {
                    (letter, -exp)
                } else {
                    (letter, exp)
                }
            })
            .collect();
        Word {
            letters: self.letters,
            body,
        }
    }
}

fn push_reduced(body: &mut Vec<(usize, i64)>, letter: usize, exp: i64) {
    if exp == 0 {
        return;
    }
    if let Some(last) = body.last_mut() {
        if last.0 == letter {
            last.1 += exp;
            if last.1 == 0 {
                body.pop();
            }
            return;
        }
    }
    body.push((letter, exp));
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

/// Parse a word. Grammar: letters `x`, `y` (or `x1`..`xk`), `^` with an
/// optionally braced signed integer, `*` or juxtaposition for products,
/// `[u,v]` for the commutator u v u^-1 v^-1, parentheses, and `1` for the
/// empty word.
pub fn parse_word(text: &str) -> Result<Word> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let w = p.parse_sequence(&[])?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(w)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::WordSyntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_whitespace() || self.bytes[self.pos] == b'*')
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    /// A sequence of terms, stopping at any of the given closers.
    fn parse_sequence(&mut self, closers: &[u8]) -> Result<Word> {
        let mut acc = Word::empty();
        loop {
            match self.peek() {
                None => return Ok(acc),
                Some(c) if closers.contains(&c) => return Ok(acc),
                Some(_) => {
                    let term = self.parse_term()?;
                    acc = acc.concat(&term);
                }
            }
        }
    }

    fn parse_term(&mut self) -> Result<Word> {
        let factor = self.parse_factor()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.parse_exponent()?;
            factor.repeat(k)
        } else {
            Ok(factor)
        }
    }

    fn parse_factor(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_sequence(b")")?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.parse_sequence(b",")?;
                if self.peek() != Some(b',') {
                    return Err(self.err("expected ',' in commutator"));
                }
                self.pos += 1;
                let v = self.parse_sequence(b"]")?;
                if self.peek() != Some(b']') {
                    return Err(self.err("expected ']'"));
                }
                self.pos += 1;
                Ok(u.concat(&v).concat(&u.inverse()).concat(&v.inverse()))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::empty())
            }
            Some(b'x') => {
                self.pos += 1;
                let idx = self.parse_optional_index()?;
                Word::from_syllables(idx + 1, &[(idx, 1)])
            }
            Some(b'y') => {
                self.pos += 1;
                Word::from_syllables(2, &[(1, 1)])
            }
            Some(_) => Err(self.err("expected a letter, '(', '[' or '1'")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    /// After `x`: an optional 1-based letter index, `x1` being `x` itself.
    fn parse_optional_index(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(0);
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("digits");
        let idx: usize = text.parse().map_err(|_| self.err("letter index overflow"))?;
        if idx == 0 {
            return Err(self.err("letter indices start at 1"));
        }
        Ok(idx - 1)
    }

    fn parse_exponent(&mut self) -> Result<i64> {
        self.skip_ws();
        let braced = self.bytes.get(self.pos) == Some(&b'{');
        if braced {
            self.pos += 1;
            self.skip_ws();
        }
        let mut sign = 1i64;
        match self.bytes.get(self.pos) {
            Some(b'-') => {
                sign = -1;
                self.pos += 1;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            _ => {}
        }
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer exponent"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("digits");
        let mag: i64 = text.parse().map_err(|_| self.err("exponent overflow"))?;
        if braced {
            self.skip_ws();
            if self.bytes.get(self.pos) != Some(&b'}') {
                return Err(self.err("expected '}'"));
            }
            self.pos += 1;
        }
        Ok(sign * mag)
    }
}

// ---------------------------------------------------------------------------
// Evaluation and images
// ---------------------------------------------------------------------------

/// Evaluate the word at a tuple of group elements, one per letter.
pub fn evaluate(word: &Word, group: &Group, args: &[Element]) -> Result<Element> {
    if args.len() != word.letters() {
        return Err(Error::Arity {
            letter: word.letters(),
            arity: args.len(),
        });
    }
    let mut acc = group.identity();
    for &(letter, exp) in &word.body {
        let arg = &args[letter];
        acc = group.mul(&acc, &group.pow(arg, exp)?)?;
    }
    Ok(acc)
}

/// Exact word image by exhaustive enumeration over all argument tuples.
///
/// Evaluation counts are checked against the budget up front; an
/// infeasible request errors out rather than truncating. Three-letter
/// words are allowed only on groups of order at most 64. The sweep is
/// partitioned across worker threads; the merged bitmap is independent of
/// the partitioning.
pub fn image(word: &Word, group: &Group, budget: u64) -> Result<ElementSet> {
    let order = group.order();
    let d = word.letters();
    if d > 3 {
        return Err(Error::Unsupported(format!(
            "images of {d}-letter words are out of scope"
        )));
    }
    if d == 3 && order > 64 {
        return Err(Error::Unsupported(
            "three-letter images are limited to groups of order at most 64".into(),
        ));
    }
    let needed = order.checked_pow(d as u32).unwrap_or(u64::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: format!("image enumeration over {d}-tuples"),
            needed,
            budget,
        });
    }

    if d == 0 {
        let mut set = ElementSet::empty(order);
        set.insert(group.rank(&group.identity()));
        return Ok(set);
    }

    let elems = group.elements();
    match d {
        1 => {
            let mut set = ElementSet::empty(order);
            for a in &elems {
                let val = eval_unchecked(word, group, &[*a]);
                set.insert(group.rank(&val));
            }
            Ok(set)
        }
        2 => Ok((0..order)
            .into_par_iter()
            .fold(
                || ElementSet::empty(order),
                |mut set, a_rank| {
                    let a = elems[a_rank as usize];
                    sweep_second_arg(word, group, &a, &elems, &mut set);
                    set
                },
            )
            .reduce(
                || ElementSet::empty(order),
                |mut a, b| {
                    a.union_with(&b);
                    a
                },
            )),
        _ => {
            let mut set = ElementSet::empty(order);
            for a in &elems {
                for b in &elems {
                    for c in &elems {
                        let val = eval_unchecked(word, group, &[*a, *b, *c]);
                        set.insert(group.rank(&val));
                    }
                }
            }
            Ok(set)
        }
    }
}

#[inline]
fn eval_unchecked(word: &Word, group: &Group, args: &[Element]) -> Element {
    let mut acc = group.identity();
    for &(letter, exp) in &word.body {
        acc = group.mul_unchecked(&acc, &group.pow_unchecked(&args[letter], exp));
    }
    acc
}

/// Inner loop of the two-letter sweep: powers of the fixed first argument
/// are hoisted out.
fn sweep_second_arg(
    word: &Word,
    group: &Group,
    a: &Element,
    elems: &[Element],
    set: &mut ElementSet,
) {
    let a_powers: Vec<Option<Element>> = word
        .body
        .iter()
        .map(|&(letter, exp)| {
            if letter == 0 {
                Some(group.pow_unchecked(a, exp))
            } else {
                None
            }
        })
        .collect();
    for b in elems {
        let mut acc = group.identity();
        for (idx, &(_, exp)) in word.body.iter().enumerate() {
            let factor = match &a_powers[idx] {
                Some(pow) => *pow,
                None => group.pow_unchecked(b, exp),
            };
            acc = group.mul_unchecked(&acc, &factor);
        }
        set.insert(group.rank(&acc));
    }
}

/// Image of the power word x^k.
pub fn power_image(group: &Group, k: i64) -> ElementSet {
    let mut set = ElementSet::empty(group.order());
    for r in 0..group.order() {
        let g = group.unrank(r).expect("rank in range");
        set.insert(group.rank(&group.pow_unchecked(&g, k)));
    }
    set
}

// ---------------------------------------------------------------------------
// Normalization pipeline
// ---------------------------------------------------------------------------

/// An alternating word x^{i1} y^{j1} ... x^{ir} y^{jr}, as exponent tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WijWord {
    pub i: Vec<i64>,
    pub j: Vec<i64>,
}

impl WijWord {
    pub fn from_word(word: &Word) -> Result<Self> {
        if word.letters() > 2 {
            return Err(Error::Unsupported("two-letter words only".into()));
        }
        let mut i = Vec::new();
        let mut j = Vec::new();
        for &(letter, exp) in &word.body {
            if letter == 0 {
                debug_assert!(i.len() == j.len(), "free reduction keeps letters alternating");
                i.push(exp);
            } else {
                if i.len() == j.len() {
                    i.push(0);
                }
                j.push(exp);
            }
        }
        if i.len() > j.len() {
            j.push(0);
        }
        Ok(WijWord { i, j })
    }

    pub fn to_word(&self) -> Word {
        let mut syllables = Vec::new();
        for (&i, &j) in self.i.iter().zip(&self.j) {
            syllables.push((0, i));
            syllables.push((1, j));
        }
        Word::from_syllables(2, &syllables).expect("syllables are well formed")
    }

    pub fn sums(&self) -> (i64, i64) {
        (self.i.iter().sum(), self.j.iter().sum())
    }
}

/// A product of commutators [x^{i1}, y^{j1}] ... [x^{ir}, y^{jr}].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CijWord {
    pub pairs: Vec<(i64, i64)>,
}

impl CijWord {
    pub fn to_word(&self) -> Word {
        let mut acc = Word::empty();
        for &(i, j) in &self.pairs {
            let syllables = [(0usize, i), (1, j), (0, -i), (1, -j)];
            acc = acc.concat(&Word::from_syllables(2, &syllables).expect("well formed"));
        }
        acc
    }
}

/// Rewrite a two-letter word, by free-group automorphisms that preserve
/// images, into x^g * u where u has zero exponent sums; g is the gcd of
/// the exponent sums (0 when both vanish).
pub fn to_power_times_wij(word: &Word) -> Result<(u64, WijWord)> {
    if word.letters() > 2 {
        return Err(Error::Unsupported("two-letter words only".into()));
    }
    let mut w = Word {
        letters: 2,
        body: word.body.clone(),
    };
    let (mut sx, mut sy) = w.exponent_sums()?;

    // Euclid on the exponent-sum vector: shear y -> y x^{-k}, then swap.
    while sy != 0 {
        let k = sx.div_euclid(sy);
        if k != 0 {
            w = w.substitute_shear(1, 0, -k)?;
            sx -= k * sy;
        }
        w = w.swap_letters();
        std::mem::swap(&mut sx, &mut sy);
        debug_assert_eq!(w.exponent_sums()?, (sx, sy));
    }
    if sx < 0 {
        w = w.invert_letter(0);
        sx = -sx;
    }
    debug_assert_eq!(w.exponent_sums()?, (sx, 0));

    // Split the leading power off: w = x^g * u with u of zero sums.
    let power = Word::from_syllables(2, &[(0, -sx)])?;
    let u = power.concat(&w);
    debug_assert_eq!(u.exponent_sums()?, (0, 0));
    Ok((sx as u64, WijWord::from_word(&u)?))
}

/// Collect a zero-sum alternating word into a product of commutators with
/// the same image on every class-2 group. One peel per step: emit
/// [x^{i_{r-1}}, y^{j_{r-1}}], then shrink the tuples to
/// I' = (i_1, ..., i_{r-2}, -(i_1+...+i_{r-2})) and
/// J' = (j_1, ..., j_{r-3}, j_{r-2}+j_{r-1}, -(j_1+...+j_{r-1})).
pub fn collect_to_commutators(wij: &WijWord) -> Result<CijWord> {
    let (si, sj) = wij.sums();
    if si != 0 || sj != 0 {
        return Err(Error::Unsupported(
            "commutator collection needs zero exponent sums".into(),
        ));
    }
    let mut i = wij.i.clone();
    let mut j = wij.j.clone();
    let mut pairs = Vec::new();
    let mut emit = |a: i64, b: i64| {
        if a != 0 && b != 0 {
            pairs.push((a, b));
        }
    };
    while i.len() > 2 {
        let r = i.len();
        emit(i[r - 2], j[r - 2]);
        // Zero sums make -(i_1+...+i_{r-2}) equal i_{r-1} + i_r, and the
        // last entry of J' equal j_r.
        let x = i[r - 2] + i[r - 1];
        i.truncate(r - 2);
        i.push(x);
        let last = j[r - 1];
        let merged = j[r - 3] + j[r - 2];
        j.truncate(r - 3);
        j.push(merged);
        j.push(last);
    }
    if i.len() == 2 {
        emit(i[0], j[0]);
        // The tail pair is forced to (-i_1, -j_1) by the zero sums and
        // contributes nothing beyond the single commutator.
        debug_assert_eq!(i[1], -i[0]);
        debug_assert_eq!(j[1], -j[0]);
    } else if i.len() == 1 {
        debug_assert_eq!(i[0], 0);
        debug_assert_eq!(j[0], 0);
    }
    Ok(CijWord { pairs })
}

/// A product of commutators has the image of the single commutator
/// [x, y^(I.J)]; returns that dot product.
pub fn fold_commutator_product(cij: &CijWord) -> i64 {
    cij.pairs.iter().map(|&(i, j)| i * j).sum()
}

/// The canonical word x^m [x, y^n]; n = 0 means a pure power, and m = e
/// encodes a trivial power part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalWord {
    pub m: u64,
    pub n: u64,
}

impl CanonicalWord {
    pub fn to_word(&self) -> Word {
        let mut syllables = vec![(0usize, self.m as i64)];
        if self.n > 0 {
            let n = self.n as i64;
            syllables.extend_from_slice(&[(0, 1), (1, n), (0, -1), (1, -n)]);
        }
        Word::from_syllables(2, &syllables).expect("well formed")
    }
}

/// Normalize a two-letter word over the given group: the returned
/// canonical word has the same image, verified by the oracle suites.
pub fn canonicalize(word: &Word, group: &Group, budget: u64) -> Result<CanonicalWord> {
    let ex = group.exponents();
    let (g, wij) = to_power_times_wij(word)?;
    let cij = collect_to_commutators(&wij)?;
    let dot = fold_commutator_product(&cij).unsigned_abs();

    // The two printed reduction steps (drop primes outside those of the
    // modulus, cap prime powers) compose to a single gcd.
    let m = if g == 0 { ex.e } else { gcd(g, ex.e) };
    let mut n = if dot == 0 { 0 } else { gcd(dot, ex.f) };
    if n == ex.f {
        // y^f is central, so the commutator part is trivial.
        n = 0;
    }
    if n > ex.e_prime {
        // Out of the canonical range; fall back to an image search over
        // the exhaustive set, which is guaranteed to contain a match.
        let target = image(word, group, budget)?;
        for cand in exhaustive_set(ex.e, ex.e_prime, ex.f) {
            if image(&cand.to_word(), group, budget)? == target {
                return Ok(cand);
            }
        }
        return Err(Error::VerificationFailed(format!(
            "no canonical word matches the image of {}",
            word.print()
        )));
    }
    Ok(CanonicalWord { m, n })
}

fn divisors(x: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=x).filter(|d| x.is_multiple_of(*d)).collect();
    out.sort_unstable();
    out
}

/// Every canonical word for a group with invariants (e, e', f): powers
/// x^m for each m | e (m = e giving the trivial word), and x^m [x, y^n]
/// for each n | f with n <= e'. Parameter-equivalent pairs (n = f acts
/// like n = 0) are deduplicated; the list is sorted.
pub fn exhaustive_set(e: u64, e_prime: u64, f: u64) -> Vec<CanonicalWord> {
    let mut set = std::collections::BTreeSet::new();
    for &m in &divisors(e) {
        set.insert(CanonicalWord { m, n: 0 });
        for &n in &divisors(f) {
            if n <= e_prime && n != f {
                set.insert(CanonicalWord { m, n });
            }
        }
    }
    set.into_iter().collect()
}

/// One catalog row: a canonical word and its exact image.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub word: CanonicalWord,
    pub image: ElementSet,
}

/// Image of every member of the exhaustive set for this group.
pub fn word_images_catalog(group: &Group, budget: u64) -> Result<Vec<CatalogEntry>> {
    let ex = group.exponents();
    exhaustive_set(ex.e, ex.e_prime, ex.f)
        .into_iter()
        .map(|word| {
            Ok(CatalogEntry {
                image: image(&word.to_word(), group, budget)?,
                word,
            })
        })
        .collect()
}

/// Number of distinct images in a catalog.
pub fn distinct_images(catalog: &[CatalogEntry]) -> usize {
    let set: std::collections::BTreeSet<String> =
        catalog.iter().map(|e| e.image.to_hex()).collect();
    set.len()
}

/// Largest number of commutators needed to write an element of the
/// derived subgroup, by breadth-first layering of the commutator-value
/// set. Layer k is exactly the image of the 2k-letter product word
/// [x1,x2]...[x_{2k-1},x_{2k}]; the final layer equals the derived
/// subgroup, which certifies that word's image.
pub fn commutator_width(group: &Group) -> Result<u64> {
    let derived = group.derived_subgroup();
    if derived.len() == 1 {
        return Ok(0);
    }
    let values = commutator_values(group);
    let order = group.order();
    let mut layer = values.clone();
    let mut width = 1u64;
    while &layer != derived {
        if !layer.is_subset_of(derived) {
            return Err(Error::VerificationFailed(
                "commutator layer escaped the derived subgroup".into(),
            ));
        }
        let mut next = ElementSet::empty(order);
        for a in layer.iter() {
            let ea = group.unrank(a)?;
            for c in values.iter() {
                let ec = group.unrank(c)?;
                next.insert(group.rank(&group.mul_unchecked(&ea, &ec)));
            }
        }
        if next == layer {
            return Err(Error::VerificationFailed(
                "commutator layers stalled below the derived subgroup".into(),
            ));
        }
        layer = next;
        width += 1;
    }
    Ok(width)
}

/// The set of single commutator values [g, h].
pub fn commutator_values(group: &Group) -> ElementSet {
    let order = group.order();
    let mut set = ElementSet::empty(order);
    if group.is_abelian_kind() {
        set.insert(group.rank(&group.identity()));
        return set;
    }
    // Commutators in the special kinds depend only on the V-parts, so a
    // sweep over coset representatives is exhaustive.
    let n = group.spec().dim_v();
    let m = group.spec().dim_s();
    let p = group.spec().p();
    let zeros = vec![0u32; m];
    let reps: Vec<Element> = crate::fp::all_vectors(n, p)
        .map(|v| group.element(&v, &zeros).expect("valid digits"))
        .collect();
    for a in &reps {
        for b in &reps {
            set.insert(group.rank(&group.commutator_unchecked(a, b)));
        }
    }
    set
}

/// True when the catalog images are exactly {1}, Z(G) and G. A true
/// answer is cross-checked against the subgroup invariants and fails
/// loudly if they disagree.
pub fn detect_special_from_images(group: &Group, budget: u64) -> Result<bool> {
    if group.is_abelian_kind() {
        return Err(Error::Unsupported(
            "the detector applies to nonabelian groups".into(),
        ));
    }
    let catalog = word_images_catalog(group, budget)?;
    let mut one = ElementSet::empty(group.order());
    one.insert(group.rank(&group.identity()));
    let mut full = ElementSet::empty(group.order());
    for r in 0..group.order() {
        full.insert(r);
    }
    let expected: std::collections::BTreeSet<String> =
        [one.to_hex(), group.center().to_hex(), full.to_hex()]
            .into_iter()
            .collect();
    let got: std::collections::BTreeSet<String> =
        catalog.iter().map(|e| e.image.to_hex()).collect();
    let detected = got == expected;
    if detected && !group.is_special_p_group() {
        return Err(Error::VerificationFailed(
            "three-image group fails the subgroup-coincidence check".into(),
        ));
    }
    Ok(detected)
}

/// Deterministic pseudo-random two-letter words for the soundness suites:
/// up to `max_syllables` syllables with exponents in [-3, 3].
pub fn random_words(seed: u64, count: usize, max_syllables: usize) -> Vec<Word> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_syllables);
            let syllables: Vec<(usize, i64)> = (0..len)
                .map(|_| {
                    let letter = rng.gen_range(0..2usize);
                    let mut exp = rng.gen_range(-3i64..=3);
                    if exp == 0 {
                        exp = 1;
                    }
                    (letter, exp)
                })
                .collect();
            Word::from_syllables(2, &syllables).expect("well formed")
        })
        .collect()
}
