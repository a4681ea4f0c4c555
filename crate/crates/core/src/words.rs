//! Alphabets, finite words, morphisms, and lazily extended infinite words.
//!
//! Letters are small unsigned integers so that the same machinery serves
//! binary words, the ternary `{0, 1, *}` annotation (star stored as letter
//! `2`), `{1, 2}` morphic words, and integer-valued gap or difference
//! sequences.

use std::collections::BTreeMap;
use std::fmt;

use crate::Error;

/// A letter of an integer alphabet.
pub type Letter = u32;

/// A finite word over an integer alphabet `{0, .., alphabet_size - 1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    alphabet_size: u32,
}

impl Word {
    pub fn new(letters: Vec<Letter>, alphabet_size: u32) -> Result<Self, Error> {
        if let Some(&letter) = letters.iter().find(|&&l| l >= alphabet_size) {
            return Err(Error::LetterOutOfRange {
                letter,
                alphabet_size,
            });
        }
        Ok(Word {
            letters,
            alphabet_size,
        })
    }

    /// Builds a word over the smallest alphabet containing its letters.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        let alphabet_size = letters.iter().max().map_or(0, |&m| m + 1);
        Word {
            letters,
            alphabet_size,
        }
    }

    pub fn empty() -> Self {
        Word {
            letters: Vec::new(),
            alphabet_size: 0,
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word {
            letters,
            alphabet_size: self.alphabet_size.max(other.alphabet_size),
        }
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word {
            letters: self.letters.repeat(times),
            alphabet_size: self.alphabet_size,
        }
    }

    /// One-line serialization: adjacent symbols for single-digit alphabets,
    /// comma-separated integers otherwise.
    pub fn render(&self) -> String {
        render_letters(&self.letters)
    }
}

/// Shared rendering rule: adjacent symbols for single-digit alphabets,
/// comma-separated integers otherwise.
pub fn render_letters(letters: &[Letter]) -> String {
    if letters.iter().all(|&l| l < 10) {
        letters
            .iter()
            .map(|l| char::from(b'0' + *l as u8))
            .collect()
    } else {
        let parts: Vec<String> = letters.iter().map(|l| l.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.render())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A non-erasing morphism between integer alphabets, given by one image word
/// per domain letter.
#[derive(Clone, Debug)]
pub struct Morphism {
    images: BTreeMap<Letter, Word>,
}

impl Morphism {
    pub fn new(images: BTreeMap<Letter, Word>) -> Result<Self, Error> {
        for (&letter, image) in &images {
            if image.is_empty() {
                return Err(Error::EmptyImage { letter });
            }
        }
        Ok(Morphism { images })
    }

    pub fn from_images(pairs: &[(Letter, &[Letter])]) -> Result<Self, Error> {
        let images = pairs
            .iter()
            .map(|(l, w)| (*l, Word::from_letters(w.to_vec())))
            .collect();
        Morphism::new(images)
    }

    /// A coding: every image is a single letter.
    pub fn coding(pairs: &[(Letter, Letter)]) -> Result<Self, Error> {
        let mapped: Vec<(Letter, Vec<Letter>)> =
            pairs.iter().map(|&(l, to)| (l, vec![to])).collect();
        let images = mapped
            .into_iter()
            .map(|(l, w)| (l, Word::from_letters(w)))
            .collect();
        Morphism::new(images)
    }

    pub fn image(&self, letter: Letter) -> Result<&Word, Error> {
        self.images
            .get(&letter)
            .ok_or(Error::MissingImage { letter })
    }

    /// Largest letter occurring in any image, plus one.
    pub fn codomain_alphabet_size(&self) -> u32 {
        self.images
            .values()
            .map(|w| w.alphabet_size())
            .max()
            .unwrap_or(0)
    }

    pub fn apply(&self, word: &Word) -> Result<Word, Error> {
        let letters = self.apply_letters(word.letters())?;
        Ok(Word::from_letters(letters))
    }

    pub fn apply_letters(&self, letters: &[Letter]) -> Result<Vec<Letter>, Error> {
        let mut out = Vec::with_capacity(letters.len());
        for &l in letters {
            out.extend_from_slice(self.image(l)?.letters());
        }
        Ok(out)
    }

    /// `self ∘ inner`: apply `inner` first, then `self`.
    pub fn compose(&self, inner: &Morphism) -> Result<Morphism, Error> {
        let mut images = BTreeMap::new();
        for (&letter, image) in &inner.images {
            images.insert(letter, self.apply(image)?);
        }
        Morphism::new(images)
    }

    pub fn iterate(&self, seed: Letter, times: u32) -> Result<Word, Error> {
        let mut word = Word::from_letters(vec![seed]);
        for _ in 0..times {
            word = self.apply(&word)?;
        }
        Ok(word)
    }
}

enum Source {
    /// Incremental fixed-point expansion: the cache is a prefix of the fixed
    /// point, and `cursor` is the next cache position whose image to append.
    Morphic { morphism: Morphism, cursor: usize },
    /// External generator, called with consecutive indices starting at 0.
    Generator(Box<dyn FnMut(u64) -> Letter + Send>),
}

/// A lazily extended infinite word with a cached prefix.
///
/// Repeated reads of the same position always return the same letter; the
/// cache only grows. Streams are single-writer: share immutable prefix
/// snapshots (`prefix`) across threads, not the stream itself.
pub struct MorphicStream {
    source: Source,
    cache: Vec<Letter>,
    index_base: u8,
}

impl fmt::Debug for MorphicStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MorphicStream")
            .field("cached", &self.cache.len())
            .field("index_base", &self.index_base)
            .finish_non_exhaustive()
    }
}

impl MorphicStream {
    /// Streams driven by an external letter generator. `index_base` is
    /// documentation for exports: 0-based or 1-based indexing convention.
    pub fn from_generator(gen: Box<dyn FnMut(u64) -> Letter + Send>, index_base: u8) -> Self {
        MorphicStream {
            source: Source::Generator(gen),
            cache: Vec::new(),
            index_base,
        }
    }

    pub fn index_base(&self) -> u8 {
        self.index_base
    }

    fn extend_to(&mut self, len: usize) {
        if self.cache.len() >= len {
            return;
        }
        self.cache.reserve(len.saturating_sub(self.cache.len()));
        match &mut self.source {
            Source::Morphic { morphism, cursor } => {
                while self.cache.len() < len {
                    let letter = self.cache[*cursor];
                    *cursor += 1;
                    let image = morphism
                        .image(letter)
                        .expect("fixed-point stream letters stay inside the morphism domain");
                    self.cache.extend_from_slice(image.letters());
                }
            }
            Source::Generator(gen) => {
                while self.cache.len() < len {
                    let next = gen(self.cache.len() as u64);
                    self.cache.push(next);
                }
            }
        }
    }

    pub fn letter(&mut self, i: usize) -> Letter {
        self.extend_to(i + 1);
        self.cache[i]
    }

    /// First `n` letters as an immutable snapshot.
    pub fn prefix(&mut self, n: usize) -> Word {
        Word::from_letters(self.prefix_letters(n).to_vec())
    }

    pub fn prefix_letters(&mut self, n: usize) -> &[Letter] {
        self.extend_to(n);
        &self.cache[..n]
    }
}

/// Iterative fixed point of `m` at `a`.
///
/// If `m(a)` starts with `a` and has length at least two, this is the usual
/// prolongable case. Otherwise, when the first letter `b` of `m(a)` is itself
/// prolongable, the limit of `mⁿ(a)` exists and equals the fixed point at `b`;
/// that stream is returned. Anything else has no iterative limit.
pub fn fixed_point(m: &Morphism, a: Letter) -> Result<MorphicStream, Error> {
    let image = m.image(a)?;
    let start = if image.letters()[0] == a && image.len() >= 2 {
        a
    } else {
        let b = image.letters()[0];
        let image_b = m.image(b)?;
        if image_b.letters()[0] == b && image_b.len() >= 2 {
            b
        } else {
            return Err(Error::NoFixedPoint { seed: a });
        }
    };
    let cache = m.image(start)?.letters().to_vec();
    Ok(MorphicStream {
        source: Source::Morphic {
            morphism: m.clone(),
            cursor: 1,
        },
        cache,
        index_base: 0,
    })
}

/// Interior zero-run lengths of a binary word: for
/// `w = 0^{x_0} 1 0^{x_1} 1 ... 0^{x_n} 1 0^{x_{n+1}}` returns `x_1 .. x_n`.
pub fn gamma(w: &Word) -> Result<Word, Error> {
    Ok(Word::from_letters(gamma_letters(w.letters())?))
}

pub fn gamma_letters(letters: &[Letter]) -> Result<Vec<Letter>, Error> {
    if let Some(&letter) = letters.iter().find(|&&l| l > 1) {
        return Err(Error::LetterOutOfRange {
            letter,
            alphabet_size: 2,
        });
    }
    let mut gaps = Vec::new();
    let mut seen_one = false;
    let mut run: Letter = 0;
    for &l in letters {
        if l == 1 {
            if seen_one {
                gaps.push(run);
            }
            seen_one = true;
            run = 0;
        } else if seen_one {
            run += 1;
        }
    }
    if gaps.is_empty() {
        return Err(Error::InsufficientOnes);
    }
    Ok(gaps)
}

/// Expands `stream` through the images of `m` until at least `len` output
/// letters exist, then truncates to exactly `len`.
pub fn morphic_image_prefix(
    m: &Morphism,
    stream: &mut MorphicStream,
    len: usize,
) -> Result<Vec<Letter>, Error> {
    let mut out = Vec::with_capacity(len);
    let mut i = 0;
    while out.len() < len {
        out.extend_from_slice(m.image(stream.letter(i))?.letters());
        i += 1;
    }
    out.truncate(len);
    Ok(out)
}
