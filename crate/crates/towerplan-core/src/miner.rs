//! Level-wise Apriori over one square's transactions, association rule
//! generation, and an exhaustive enumeration used as a test oracle.
//!
//! Supports and confidences are exact rationals so the oracle comparison
//! and the rule arithmetic checks need no tolerance.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use thiserror::Error;

/// Largest item universe the brute-force oracle will enumerate.
pub const BRUTE_FORCE_MAX_ITEMS: usize = 20;

/// Reduced non-negative fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Fraction {
    /// Panics if `den` is zero.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Fraction {
            num: num / g,
            den: den / g,
        }
    }

    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    /// Exact value of a decimal threshold such as 0.5 or 0.35, read to
    /// six decimal places.
    pub fn from_decimal(x: f64) -> Option<Self> {
        if !x.is_finite() || x < 0.0 {
            return None;
        }
        let scaled = libm::round(x * 1_000_000.0);
        if scaled > u64::MAX as f64 {
            return None;
        }
        Some(Fraction::new(scaled as u64, 1_000_000))
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `count / total >= self`, without building the fraction.
    fn admits(self, count: usize, total: usize) -> bool {
        u128::from(count as u64) * u128::from(self.den)
            >= u128::from(self.num) * u128::from(total as u64)
    }
}

impl core::ops::Mul for Fraction {
    type Output = Fraction;

    fn mul(self, other: Fraction) -> Fraction {
        let n = u128::from(self.num) * u128::from(other.num);
        let d = u128::from(self.den) * u128::from(other.den);
        let g = {
            let (mut a, mut b) = (n, d);
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            a.max(1)
        };
        Fraction {
            num: (n / g) as u64,
            den: (d / g) as u64,
        }
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (u128::from(self.num) * u128::from(other.den))
            .cmp(&(u128::from(other.num) * u128::from(self.den)))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinerError {
    #[error("transaction list is empty")]
    EmptyTransactions,
    #[error("threshold must lie in (0, 1], got {0}")]
    InvalidThreshold(Fraction),
    #[error("item universe has {0} items, the exhaustive oracle accepts at most {BRUTE_FORCE_MAX_ITEMS}")]
    UniverseTooLarge(usize),
    #[error("frequent itemset list is not closed under subsets")]
    MalformedFrequentSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemsetSupport<T> {
    /// Sorted, without duplicates.
    pub items: Vec<T>,
    pub count: usize,
    pub total: usize,
}

impl<T> ItemsetSupport<T> {
    pub fn support(&self) -> Fraction {
        Fraction::new(self.count as u64, self.total as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociationRule<T> {
    pub antecedent: Vec<T>,
    pub consequent: Vec<T>,
    /// Transactions holding antecedent ∪ consequent.
    pub union_count: usize,
    pub antecedent_count: usize,
    pub total: usize,
}

impl<T> AssociationRule<T> {
    pub fn support(&self) -> Fraction {
        Fraction::new(self.union_count as u64, self.total as u64)
    }

    pub fn antecedent_support(&self) -> Fraction {
        Fraction::new(self.antecedent_count as u64, self.total as u64)
    }

    pub fn confidence(&self) -> Fraction {
        Fraction::new(self.union_count as u64, self.antecedent_count as u64)
    }
}

fn check_threshold(t: Fraction) -> Result<(), MinerError> {
    if t.numer() == 0 || t > Fraction::ONE {
        Err(MinerError::InvalidThreshold(t))
    } else {
        Ok(())
    }
}

fn normalize<T: Ord + Clone>(transactions: &[Vec<T>]) -> Vec<Vec<T>> {
    transactions
        .iter()
        .map(|t| {
            let mut t = t.clone();
            t.sort();
            t.dedup();
            t
        })
        .collect()
}

/// Both slices sorted.
fn is_subset<T: Ord>(small: &[T], big: &[T]) -> bool {
    let mut it = big.iter();
    'outer: for s in small {
        for b in it.by_ref() {
            match b.cmp(s) {
                Ordering::Less => continue,
                Ordering::Equal => continue 'outer,
                Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

fn count_containing<T: Ord>(items: &[T], transactions: &[Vec<T>]) -> usize {
    transactions.iter().filter(|t| is_subset(items, t)).count()
}

/// Fraction of transactions containing every item of `items`.
pub fn support<T: Ord + Clone>(
    items: &[T],
    transactions: &[Vec<T>],
) -> Result<Fraction, MinerError> {
    if transactions.is_empty() {
        return Err(MinerError::EmptyTransactions);
    }
    let mut items = items.to_vec();
    items.sort();
    items.dedup();
    let tx = normalize(transactions);
    Ok(Fraction::new(
        count_containing(&items, &tx) as u64,
        tx.len() as u64,
    ))
}

fn canonical<T: Ord>(a: &ItemsetSupport<T>, b: &ItemsetSupport<T>) -> Ordering {
    a.items
        .len()
        .cmp(&b.items.len())
        .then_with(|| a.items.cmp(&b.items))
}

/// All itemsets with support at least `minsup`, ordered by size and then
/// lexicographically.
pub fn apriori<T: Ord + Clone>(
    transactions: &[Vec<T>],
    minsup: Fraction,
) -> Result<Vec<ItemsetSupport<T>>, MinerError> {
    check_threshold(minsup)?;
    if transactions.is_empty() {
        return Err(MinerError::EmptyTransactions);
    }
    let tx = normalize(transactions);
    let total = tx.len();

    let mut singles: BTreeMap<&T, usize> = BTreeMap::new();
    for t in &tx {
        for item in t {
            *singles.entry(item).or_default() += 1;
        }
    }
    let mut level: Vec<ItemsetSupport<T>> = singles
        .into_iter()
        .filter(|(_, c)| minsup.admits(*c, total))
        .map(|(item, count)| ItemsetSupport {
            items: alloc::vec![item.clone()],
            count,
            total,
        })
        .collect();

    let mut out = Vec::new();
    while !level.is_empty() {
        let frequent: BTreeSet<&[T]> = level.iter().map(|s| s.items.as_slice()).collect();
        let mut candidates: Vec<Vec<T>> = Vec::new();
        // `level` is sorted, so sets sharing a prefix are contiguous.
        for (i, a) in level.iter().enumerate() {
            let k = a.items.len();
            for b in &level[i + 1..] {
                if a.items[..k - 1] != b.items[..k - 1] {
                    break;
                }
                let mut cand = a.items.clone();
                cand.push(b.items[k - 1].clone());
                let closed = (0..cand.len()).all(|drop| {
                    let sub: Vec<T> = cand
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != drop)
                        .map(|(_, x)| x.clone())
                        .collect();
                    frequent.contains(sub.as_slice())
                });
                if closed {
                    candidates.push(cand);
                }
            }
        }
        let next: Vec<ItemsetSupport<T>> = candidates
            .into_iter()
            .filter_map(|items| {
                let count = count_containing(&items, &tx);
                minsup.admits(count, total).then_some(ItemsetSupport {
                    items,
                    count,
                    total,
                })
            })
            .collect();
        out.append(&mut level);
        level = next;
    }
    out.sort_by(canonical);
    Ok(out)
}

/// Exhaustive oracle: counts every non-empty subset of the item universe.
pub fn brute_force_frequent<T: Ord + Clone>(
    transactions: &[Vec<T>],
    minsup: Fraction,
) -> Result<Vec<ItemsetSupport<T>>, MinerError> {
    check_threshold(minsup)?;
    if transactions.is_empty() {
        return Err(MinerError::EmptyTransactions);
    }
    let tx = normalize(transactions);
    let universe: Vec<T> = tx
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<T>>()
        .into_iter()
        .collect();
    if universe.len() > BRUTE_FORCE_MAX_ITEMS {
        return Err(MinerError::UniverseTooLarge(universe.len()));
    }
    let total = tx.len();
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << universe.len()) {
        let items: Vec<T> = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, x)| x.clone())
            .collect();
        let count = count_containing(&items, &tx);
        if minsup.admits(count, total) {
            out.push(ItemsetSupport {
                items,
                count,
                total,
            });
        }
    }
    out.sort_by(canonical);
    Ok(out)
}

/// Every rule `A ⇒ C` with `A ∪ C` frequent, `A` and `C` non-empty and
/// disjoint, and confidence at least `minconf`. Rules are ordered by
/// antecedent (size, then items), then consequent.
pub fn generate_rules<T: Ord + Clone>(
    frequent: &[ItemsetSupport<T>],
    minconf: Fraction,
) -> Result<Vec<AssociationRule<T>>, MinerError> {
    check_threshold(minconf)?;
    let counts: BTreeMap<&[T], usize> = frequent
        .iter()
        .map(|s| (s.items.as_slice(), s.count))
        .collect();
    let mut rules = Vec::new();
    for set in frequent.iter().filter(|s| s.items.len() >= 2) {
        let k = set.items.len();
        debug_assert!(k < 64);
        for mask in 1u64..((1u64 << k) - 1) {
            let (mut ante, mut cons) = (Vec::new(), Vec::new());
            for (i, item) in set.items.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    ante.push(item.clone());
                } else {
                    cons.push(item.clone());
                }
            }
            let ante_count = *counts
                .get(ante.as_slice())
                .ok_or(MinerError::MalformedFrequentSet)?;
            if !counts.contains_key(cons.as_slice()) {
                return Err(MinerError::MalformedFrequentSet);
            }
            if minconf.admits(set.count, ante_count) {
                rules.push(AssociationRule {
                    antecedent: ante,
                    consequent: cons,
                    union_count: set.count,
                    antecedent_count: ante_count,
                    total: set.total,
                });
            }
        }
    }
    rules.sort_by(|a, b| {
        a.antecedent
            .len()
            .cmp(&b.antecedent.len())
            .then_with(|| a.antecedent.cmp(&b.antecedent))
            .then_with(|| a.consequent.len().cmp(&b.consequent.len()))
            .then_with(|| a.consequent.cmp(&b.consequent))
    });
    Ok(rules)
}
