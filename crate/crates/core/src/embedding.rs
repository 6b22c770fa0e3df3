//! Database embedding, symbol assignment and oracle evaluation.
//!
//! A catalog of `catalog_size` items is padded to `N = 4^n` items and then
//! embedded in a database four times larger, `Ñ = 4N = 4^(n+1)`, whose items
//! are identified with the computational basis states `0 .. Ñ`. The symbol of
//! an item is the `2(n+1)`-bit binary expansion of its basis index, most
//! significant bit first.
//!
//! Layout of the basis indices:
//!
//! | range            | contents                                  |
//! |------------------|-------------------------------------------|
//! | `0 .. ν₀`        | ground-state items                        |
//! | `ν₀ .. N`        | extension items with a `00` leading pair  |
//! | `N .. N + 𝒩`     | catalog items `1 ..= 𝒩`                   |
//! | `N + 𝒩 .. 2N`    | fillers that pad the catalog up to `N`    |
//! | `2N .. 4N`       | remaining extension items                 |
//!
//! Every item of the padded database (catalog plus fillers) therefore has a
//! leading symbol pair different from `00`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// The user's database: how many items there are and which are targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    catalog_size: u64,
    targets: BTreeSet<u64>,
}

impl ProblemSpec {
    /// Targets are 1-based catalog indices.
    pub fn new(catalog_size: u64, targets: impl IntoIterator<Item = u64>) -> Result<Self> {
        if catalog_size == 0 {
            return Err(Error::InvalidSpec("catalog must contain at least one item".into()));
        }
        let mut set = BTreeSet::new();
        for t in targets {
            if t == 0 || t > catalog_size {
                return Err(Error::InvalidSpec(format!(
                    "target {t} outside catalog range 1..={catalog_size}"
                )));
            }
            if !set.insert(t) {
                return Err(Error::InvalidSpec(format!("target {t} listed twice")));
            }
        }
        if set.is_empty() {
            return Err(Error::InvalidSpec("at least one target is required".into()));
        }
        Ok(Self {
            catalog_size,
            targets: set,
        })
    }

    /// Targets are catalog items `1 ..= count`.
    pub fn first(catalog_size: u64, count: u64) -> Result<Self> {
        check_count(catalog_size, count)?;
        Self::new(catalog_size, 1..=count)
    }

    /// `count` distinct targets drawn uniformly from the catalog.
    pub fn seeded_random(catalog_size: u64, count: u64, seed: u64) -> Result<Self> {
        check_count(catalog_size, count)?;
        let len = usize::try_from(catalog_size)
            .map_err(|_| Error::InvalidSpec("catalog too large for random placement".into()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let picks = index::sample(&mut rng, len, count as usize);
        Self::new(catalog_size, picks.into_iter().map(|i| i as u64 + 1))
    }

    pub fn catalog_size(&self) -> u64 {
        self.catalog_size
    }

    pub fn targets(&self) -> &BTreeSet<u64> {
        &self.targets
    }

    pub fn target_count(&self) -> u64 {
        self.targets.len() as u64
    }

    pub fn is_target(&self, item: u64) -> bool {
        self.targets.contains(&item)
    }
}

fn check_count(catalog_size: u64, count: u64) -> Result<()> {
    if count == 0 || count > catalog_size {
        return Err(Error::InvalidSpec(format!(
            "target count {count} must lie in 1..={catalog_size}"
        )));
    }
    Ok(())
}

/// Exact filling fraction `ν₀ / ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Rho {
    pub targets: u64,
    pub envelope: u64,
}

impl Rho {
    pub fn value(self) -> f64 {
        self.targets as f64 / self.envelope as f64
    }

    /// Exact comparison of `ν₀/ν` against 1/2.
    pub fn cmp_half(self) -> std::cmp::Ordering {
        (2 * self.targets as u128).cmp(&(self.envelope as u128))
    }

    pub fn is_one(self) -> bool {
        self.targets == self.envelope
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.targets, self.envelope)
    }
}

/// Smallest `k` with `4^k >= x`, together with `4^k`.
fn ceil_log4(x: u64) -> Option<(u32, u64)> {
    let mut k = 0u32;
    let mut pow = 1u64;
    while pow < x {
        pow = pow.checked_mul(4)?;
        k += 1;
    }
    Some((k, pow))
}

/// All sizes and ratios derived from a problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Embedding {
    catalog_size: u64,
    target_count: u64,
    /// `n = ⌈log₄ 𝒩⌉`
    padded_exponent: u32,
    /// `N = 4^n`
    padded_size: u64,
    /// `ñ = n + 1`
    extended_exponent: u32,
    /// `Ñ = 4N`
    extended_size: u64,
    /// `p̃ = ⌈log₄ ν₀⌉`
    target_exponent: u32,
    /// `ν = 4^p̃`
    target_envelope: u64,
    rho: Rho,
    power_of_four: bool,
}

impl Embedding {
    pub fn new(spec: &ProblemSpec) -> Result<Self> {
        Self::from_counts(spec.catalog_size(), spec.target_count())
    }

    /// Builds the embedding from sizes alone; sufficient for the analytic
    /// and cost models, which never look at individual targets.
    pub fn from_counts(catalog_size: u64, target_count: u64) -> Result<Self> {
        if catalog_size == 0 {
            return Err(Error::InvalidSpec("catalog must contain at least one item".into()));
        }
        check_count(catalog_size, target_count)?;
        let (n, big_n) = ceil_log4(catalog_size).ok_or(Error::EmbeddingOverflow(catalog_size))?;
        let big_n_tilde = big_n.checked_mul(4).ok_or(Error::EmbeddingOverflow(catalog_size))?;
        let (p, nu) = ceil_log4(target_count).expect("target_count <= catalog_size");
        Ok(Self {
            catalog_size,
            target_count,
            padded_exponent: n,
            padded_size: big_n,
            extended_exponent: n + 1,
            extended_size: big_n_tilde,
            target_exponent: p,
            target_envelope: nu,
            rho: Rho {
                targets: target_count,
                envelope: nu,
            },
            power_of_four: target_count == nu,
        })
    }

    pub fn catalog_size(&self) -> u64 {
        self.catalog_size
    }

    pub fn target_count(&self) -> u64 {
        self.target_count
    }

    pub fn padded_exponent(&self) -> u32 {
        self.padded_exponent
    }

    pub fn padded_size(&self) -> u64 {
        self.padded_size
    }

    pub fn extended_exponent(&self) -> u32 {
        self.extended_exponent
    }

    pub fn extended_size(&self) -> u64 {
        self.extended_size
    }

    pub fn target_exponent(&self) -> u32 {
        self.target_exponent
    }

    pub fn target_envelope(&self) -> u64 {
        self.target_envelope
    }

    pub fn rho(&self) -> Rho {
        self.rho
    }

    pub fn is_power_of_four(&self) -> bool {
        self.power_of_four
    }

    /// Number of iterations `ñ − p̃` that concentrate the state on
    /// `{F_{ñ−p̃} = 1}`.
    pub fn main_phase_len(&self) -> u32 {
        self.extended_exponent - self.target_exponent
    }

    /// Number of symbol bits, `2ñ`.
    pub fn symbol_bits(&self) -> u32 {
        2 * self.extended_exponent
    }

    /// `4^(ñ−j)`: the size of the block of indices whose leading `2j`
    /// symbol bits are zero. Zero-length prefixes give the whole space.
    pub fn zero_prefix_block(&self, j: u32) -> u64 {
        let rest = self.extended_exponent.saturating_sub(j);
        1u64 << (2 * rest)
    }
}

/// An item of the extended database.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum Item {
    /// 1-based catalog item.
    Catalog(u64),
    /// Non-target padding that completes the catalog to `N` items.
    Filler(u64),
    /// Ground-state item `G_{k+1}`.
    Ground(u64),
    /// Non-ground item outside the padded database.
    Extension(u64),
}

/// Fixed-width bit string; renders most significant bit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitString {
    pub bits: u64,
    pub len: u32,
}

impl BitString {
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in (0..self.len).rev() {
            f.write_str(if (self.bits >> k) & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Bijection between items of the extended database and basis indices.
#[derive(Debug, Clone, Copy)]
pub struct SymbolMap {
    embedding: Embedding,
}

impl SymbolMap {
    pub fn new(embedding: Embedding) -> Self {
        Self { embedding }
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    /// Offset of catalog item 1.
    pub fn catalog_offset(&self) -> u64 {
        self.embedding.padded_size
    }

    pub fn ground_set(&self) -> Range<u64> {
        0..self.embedding.target_count
    }

    pub fn index_of(&self, item: Item) -> Result<u64> {
        let e = &self.embedding;
        let big_n = e.padded_size;
        let nu0 = e.target_count;
        let (index, limit) = match item {
            Item::Catalog(i) if i >= 1 => (big_n + i - 1, big_n + e.catalog_size),
            Item::Catalog(_) => return Err(Error::InvalidSpec("catalog items are 1-based".into())),
            Item::Filler(k) => (big_n + e.catalog_size + k, 2 * big_n),
            Item::Ground(k) => (k, nu0),
            Item::Extension(k) if k < big_n - nu0 => return Ok(nu0 + k),
            Item::Extension(k) => (2 * big_n + (k - (big_n - nu0)), 4 * big_n),
        };
        if index >= limit {
            return Err(Error::InvalidSpec(format!("{item:?} does not exist in this embedding")));
        }
        Ok(index)
    }

    pub fn item_at(&self, index: u64) -> Result<Item> {
        let e = &self.embedding;
        self.check_index(index)?;
        let big_n = e.padded_size;
        let nu0 = e.target_count;
        Ok(if index < nu0 {
            Item::Ground(index)
        } else if index < big_n {
            Item::Extension(index - nu0)
        } else if index < big_n + e.catalog_size {
            Item::Catalog(index - big_n + 1)
        } else if index < 2 * big_n {
            Item::Filler(index - big_n - e.catalog_size)
        } else {
            Item::Extension(big_n - nu0 + (index - 2 * big_n))
        })
    }

    /// Catalog item at `index`, if any.
    pub fn catalog_item(&self, index: u64) -> Option<u64> {
        match self.item_at(index) {
            Ok(Item::Catalog(i)) => Some(i),
            _ => None,
        }
    }

    pub fn symbol(&self, index: u64) -> Result<BitString> {
        self.check_index(index)?;
        Ok(BitString {
            bits: index,
            len: self.embedding.symbol_bits(),
        })
    }

    /// The leading `2j` bits `S_{2j}` of the symbol at `index`.
    pub fn prefix(&self, index: u64, j: u32) -> Result<BitString> {
        self.check_index(index)?;
        let max = self.embedding.extended_exponent;
        if j == 0 || j > max {
            return Err(Error::PrefixOutOfRange { j, max });
        }
        let shift = 2 * (max - j);
        Ok(BitString {
            bits: index >> shift,
            len: 2 * j,
        })
    }

    fn check_index(&self, index: u64) -> Result<()> {
        let size = self.embedding.extended_size;
        if index >= size {
            return Err(Error::IndexOutOfRange { index, size });
        }
        Ok(())
    }
}

/// The oracle `f` and the auxiliary predicates `f_j`, `F_j = f ∨ f_j`.
///
/// `f_j` and `F_j` are pure. The call counter tracks applications of the
/// phase oracle `(-1)^f` to a state; evaluating `f_j` never touches it.
#[derive(Debug)]
pub struct OracleSet {
    embedding: Embedding,
    /// Sorted basis indices of the targets.
    targets: Vec<u64>,
    calls: AtomicU64,
}

impl OracleSet {
    pub fn new(spec: &ProblemSpec) -> Result<Self> {
        let embedding = Embedding::new(spec)?;
        let map = SymbolMap::new(embedding);
        let targets = spec
            .targets()
            .iter()
            .map(|&t| map.index_of(Item::Catalog(t)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            embedding,
            targets,
            calls: AtomicU64::new(0),
        })
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn target_indices(&self) -> &[u64] {
        &self.targets
    }

    /// `f(index)`.
    pub fn f(&self, index: u64) -> bool {
        self.targets.binary_search(&index).is_ok()
    }

    /// `f_j(index)`: leading `2j` symbol bits zero and not a ground item.
    /// Defined for every `j >= 1`; vanishes identically once the zero-prefix
    /// block no longer extends past the ground set.
    pub fn aux(&self, index: u64, j: u32) -> bool {
        self.aux_range(j).contains(&index)
    }

    /// `F_j(index) = f(index) ∨ f_j(index)`.
    pub fn marked(&self, index: u64, j: u32) -> bool {
        self.f(index) || self.aux(index, j)
    }

    /// The contiguous index range on which `f_j = 1`.
    pub fn aux_range(&self, j: u32) -> Range<u64> {
        let start = self.embedding.target_count;
        let end = self.embedding.zero_prefix_block(j).max(start);
        start..end
    }

    /// Oracle applications recorded so far.
    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset_calls(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }

    /// One application of the phase oracle `I − 2 Σ_T |w⟩⟨w|`; counts as a
    /// single oracle call.
    pub fn apply_target_phase(&self, amplitudes: &mut [f64]) {
        self.calls.fetch_add(1, Ordering::Relaxed);
        for &t in &self.targets {
            amplitudes[t as usize] = -amplitudes[t as usize];
        }
    }

    /// Applies `(-1)^{f_j}` without consulting the oracle.
    pub fn apply_aux_phase(&self, amplitudes: &mut [f64], j: u32) {
        let range = self.aux_range(j);
        for a in &mut amplitudes[range.start as usize..range.end as usize] {
            *a = -*a;
        }
    }
}

/// Exhaustive count of `{index : F_j(index) = 1}`.
pub fn count_marked(oracle: &OracleSet, j: u32) -> u64 {
    (0..oracle.embedding.extended_size)
        .filter(|&i| oracle.marked(i, j))
        .count() as u64
}

/// Exhaustive `Σ_i (-1)^{F_j(i)}` over the whole extended database.
pub fn signed_sum_all(oracle: &OracleSet, j: u32) -> i64 {
    (0..oracle.embedding.extended_size)
        .map(|i| if oracle.marked(i, j) { -1 } else { 1 })
        .sum()
}

/// Exhaustive `Σ_{F_j = 1} (-1)^{F_{j+1}}`.
pub fn signed_sum_within(oracle: &OracleSet, j: u32) -> i64 {
    (0..oracle.embedding.extended_size)
        .filter(|&i| oracle.marked(i, j))
        .map(|i| if oracle.marked(i, j + 1) { -1 } else { 1 })
        .sum()
}
