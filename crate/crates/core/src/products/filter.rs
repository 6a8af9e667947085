use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("index set must be nonempty")]
    EmptyIndexSet,
    #[error("index {index} is outside 0..{size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("the sets have empty intersection, so they generate no proper filter")]
    Improper,
    #[error(
        "bad filter syntax `{0}`; expected `full`, `kernel=0,2` or `subbasis={{0,1}};{{1,2}}`"
    )]
    Syntax(String),
}

/// A proper filter on the index set `0..size`, given by its kernel: a set
/// belongs to the filter iff it contains the kernel.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Filter {
    size: usize,
    kernel: Vec<usize>,
}

fn check_indices(size: usize, set: &[usize]) -> Result<(), FilterError> {
    match set.iter().find(|&&i| i >= size) {
        Some(&index) => Err(FilterError::IndexOutOfRange { index, size }),
        None => Ok(()),
    }
}

impl Filter {
    pub fn new(size: usize, kernel: &[usize]) -> Result<Self, FilterError> {
        if size == 0 {
            return Err(FilterError::EmptyIndexSet);
        }
        check_indices(size, kernel)?;
        let mut kernel = kernel.to_vec();
        kernel.sort_unstable();
        kernel.dedup();
        if kernel.is_empty() {
            return Err(FilterError::Improper);
        }
        Ok(Filter { size, kernel })
    }

    /// The filter `{I}`.
    pub fn full(size: usize) -> Result<Self, FilterError> {
        Self::new(size, &(0..size).collect::<Vec<_>>())
    }

    pub fn principal(size: usize, i: usize) -> Result<Self, FilterError> {
        Self::new(size, &[i])
    }

    /// The filter generated by `sets`; with no sets, `{I}`.
    pub fn from_subbasis(size: usize, sets: &[Vec<usize>]) -> Result<Self, FilterError> {
        if size == 0 {
            return Err(FilterError::EmptyIndexSet);
        }
        let mut kernel: Vec<usize> = (0..size).collect();
        for s in sets {
            check_indices(size, s)?;
            kernel.retain(|i| s.contains(i));
        }
        Self::new(size, &kernel)
    }

    /// Every proper filter on `0..size`, one per nonempty kernel, in
    /// bitmask order.
    pub fn all(size: usize) -> Vec<Filter> {
        assert!(size > 0 && size < 32);
        (1u32..(1 << size))
            .map(|mask| Filter {
                size,
                kernel: (0..size).filter(|&i| mask >> i & 1 == 1).collect(),
            })
            .collect()
    }

    pub fn index_count(&self) -> usize {
        self.size
    }

    pub fn kernel(&self) -> &[usize] {
        &self.kernel
    }

    pub fn contains(&self, set: &[usize]) -> bool {
        self.kernel.iter().all(|i| set.contains(i))
    }

    /// Whether `{i : pred(i)}` belongs to the filter.
    pub fn holds_on(&self, pred: impl Fn(usize) -> bool) -> bool {
        self.kernel.iter().all(|&i| pred(i))
    }

    pub fn is_ultrafilter(&self) -> bool {
        self.kernel.len() == 1
    }

    /// `self ⊆ other` as families of sets.
    pub fn is_subset_of(&self, other: &Filter) -> bool {
        self.size == other.size && other.kernel.iter().all(|i| self.kernel.contains(i))
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.kernel.iter().map(|i| i.to_string()).collect();
        write!(f, "kernel={}", ks.join(","))
    }
}

/// `inf_{J in F} sup_{i in J} g(i)`, which on a finite index set is the
/// maximum of `g` over the kernel.
pub fn limsup(f: &Filter, g: &[Value]) -> Value {
    assert_eq!(g.len(), f.size, "value sequence must cover the index set");
    let v = f.kernel.iter().map(|&i| g[i]).max().unwrap();
    #[cfg(debug_assertions)]
    if f.size <= 12 {
        debug_assert_eq!(v, crate::oracle::limsup_by_definition(&f.kernel, g));
    }
    v
}

/// All ultrafilters containing `f`: the principal ones at kernel points.
pub fn ultrafilters_extending(f: &Filter) -> Vec<Filter> {
    f.kernel
        .iter()
        .map(|&i| Filter {
            size: f.size,
            kernel: vec![i],
        })
        .collect()
}

/// Filter syntax independent of the index set size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterSpec {
    Full,
    Kernel(Vec<usize>),
    Subbasis(Vec<Vec<usize>>),
}

impl FilterSpec {
    pub fn resolve(&self, size: usize) -> Result<Filter, FilterError> {
        match self {
            FilterSpec::Full => Filter::full(size),
            FilterSpec::Kernel(k) => Filter::new(size, k),
            FilterSpec::Subbasis(sets) => Filter::from_subbasis(size, sets),
        }
    }
}

fn index_list(s: &str, whole: &str) -> Result<Vec<usize>, FilterError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| FilterError::Syntax(whole.to_string()))
        })
        .collect()
}

impl FromStr for FilterSpec {
    type Err = FilterError;

    fn from_str(s: &str) -> Result<Self, FilterError> {
        let t = s.trim();
        if t == "full" {
            return Ok(FilterSpec::Full);
        }
        if let Some(rest) = t.strip_prefix("kernel=") {
            return Ok(FilterSpec::Kernel(index_list(rest, s)?));
        }
        if let Some(rest) = t.strip_prefix("subbasis=") {
            let rest = rest.trim().trim_matches(|c| c == '\'' || c == '"');
            if rest.is_empty() {
                return Ok(FilterSpec::Subbasis(Vec::new()));
            }
            let sets = rest
                .split(';')
                .map(|part| {
                    let inner = part
                        .trim()
                        .strip_prefix('{')
                        .and_then(|p| p.strip_suffix('}'))
                        .ok_or_else(|| FilterError::Syntax(s.to_string()))?;
                    index_list(inner, s)
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(FilterSpec::Subbasis(sets));
        }
        Err(FilterError::Syntax(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Value {
        Value::new(n, d).unwrap()
    }

    #[test]
    fn subbasis_kernels() {
        // indices shifted to 0-based: {0,1} and {1,2} meet in {1}
        let f = Filter::from_subbasis(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(f.kernel(), &[1]);
        assert_eq!(
            Filter::from_subbasis(2, &[]).unwrap(),
            Filter::full(2).unwrap()
        );
        assert_eq!(
            Filter::from_subbasis(2, &[vec![0], vec![1]]),
            Err(FilterError::Improper)
        );
        assert!(f.contains(&[1, 2]));
        assert!(!f.contains(&[0, 2]));
    }

    #[test]
    fn limsup_values() {
        let g = [q(1, 4), q(1, 2)];
        assert_eq!(limsup(&Filter::full(2).unwrap(), &g), q(1, 2));
        let g = [q(3, 4), q(1, 2)];
        assert_eq!(limsup(&Filter::new(2, &[1]).unwrap(), &g), q(1, 2));
        assert_eq!(limsup(&Filter::principal(2, 0).unwrap(), &g), q(3, 4));
    }

    #[test]
    fn extending_ultrafilters() {
        let f = Filter::new(3, &[0, 2]).unwrap();
        let us = ultrafilters_extending(&f);
        assert_eq!(
            us,
            vec![
                Filter::principal(3, 0).unwrap(),
                Filter::principal(3, 2).unwrap()
            ]
        );
        assert!(us.iter().all(|u| f.is_subset_of(u)));
        assert_eq!(ultrafilters_extending(&Filter::full(4).unwrap()).len(), 4);
        let u = Filter::principal(3, 1).unwrap();
        assert_eq!(ultrafilters_extending(&u), vec![u]);
    }

    #[test]
    fn counts_all_filters() {
        assert_eq!(Filter::all(3).len(), 7);
        assert_eq!(Filter::all(5).len(), 31);
    }

    #[test]
    fn filter_syntax() {
        assert_eq!("full".parse::<FilterSpec>().unwrap(), FilterSpec::Full);
        assert_eq!(
            "kernel=0,2".parse::<FilterSpec>().unwrap(),
            FilterSpec::Kernel(vec![0, 2])
        );
        assert_eq!(
            "subbasis='{0,1};{1,2}'".parse::<FilterSpec>().unwrap(),
            FilterSpec::Subbasis(vec![vec![0, 1], vec![1, 2]])
        );
        assert!("kernel=a".parse::<FilterSpec>().is_err());
        assert_eq!(Filter::new(3, &[2, 0]).unwrap().to_string(), "kernel=0,2");
    }
}
