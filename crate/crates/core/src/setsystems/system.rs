use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg::text::{parse_matrix, write_matrix};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A finite system of subsets of the ground set `{0, .., ground_size - 1}`,
/// stored as its 0/1 incidence matrix (row `i` is the indicator of set `i`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetSystem {
    ground_size: usize,
    num_sets: usize,
    bits: Vec<u8>,
    labels: Option<Vec<String>>,
}

impl SetSystem {
    /// Builds a system from explicit element lists (0-based). Duplicates are kept.
    pub fn from_sets<S: AsRef<[usize]>>(ground_size: usize, sets: &[S]) -> Result<Self> {
        let mut bits = vec![0u8; sets.len() * ground_size];
        for (i, s) in sets.iter().enumerate() {
            for &x in s.as_ref() {
                if x >= ground_size {
                    return Err(Error::invalid(format!(
                        "element {x} outside ground set of size {ground_size}"
                    )));
                }
                bits[i * ground_size + x] = 1;
            }
        }
        Ok(SetSystem {
            ground_size,
            num_sets: sets.len(),
            bits,
            labels: None,
        })
    }

    pub(crate) fn from_bits(ground_size: usize, bits: Vec<u8>) -> Self {
        debug_assert!(ground_size == 0 || bits.len().is_multiple_of(ground_size));
        let num_sets = bits.len().checked_div(ground_size).unwrap_or(0);
        SetSystem {
            ground_size,
            num_sets,
            bits,
            labels: None,
        }
    }

    /// Interprets a matrix as an incidence matrix; every entry must be exactly 0 or 1.
    pub fn from_incidence<T: Scalar>(a: &Matrix<T>) -> Result<Self> {
        let mut bits = Vec::with_capacity(a.rows() * a.cols());
        for (k, &x) in a.as_slice().iter().enumerate() {
            if x == T::zero() {
                bits.push(0);
            } else if x == T::one() {
                bits.push(1);
            } else {
                return Err(Error::invalid(format!(
                    "incidence entry ({}, {}) = {x} is not 0 or 1",
                    k / a.cols().max(1),
                    k % a.cols().max(1)
                )));
            }
        }
        Ok(SetSystem {
            ground_size: a.cols(),
            num_sets: a.rows(),
            bits,
            labels: None,
        })
    }

    pub fn incidence<T: Scalar>(&self) -> Matrix<T> {
        let data = self
            .bits
            .iter()
            .map(|&b| if b == 1 { T::one() } else { T::zero() })
            .collect();
        Matrix::from_vec(self.num_sets, self.ground_size, data).expect("consistent shape")
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn num_sets(&self) -> usize {
        self.num_sets
    }

    /// Indicator row of set `i`.
    pub fn row(&self, i: usize) -> &[u8] {
        &self.bits[i * self.ground_size..(i + 1) * self.ground_size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        (0..self.num_sets).map(move |i| self.row(i))
    }

    /// Elements of set `i`, increasing.
    pub fn set(&self, i: usize) -> Vec<usize> {
        self.row(i)
            .iter()
            .enumerate()
            .filter_map(|(j, &b)| (b == 1).then_some(j))
            .collect()
    }

    pub fn sets(&self) -> Vec<Vec<usize>> {
        (0..self.num_sets).map(|i| self.set(i)).collect()
    }

    pub fn contains_set(&self, elements: &[usize]) -> bool {
        let mut want = vec![0u8; self.ground_size];
        for &x in elements {
            if x >= self.ground_size {
                return false;
            }
            want[x] = 1;
        }
        self.rows().any(|r| r == want.as_slice())
    }

    /// Maximum number of sets containing a single point.
    pub fn max_degree(&self) -> usize {
        (0..self.ground_size)
            .map(|j| self.rows().filter(|r| r[j] == 1).count())
            .max()
            .unwrap_or(0)
    }

    pub fn max_set_size(&self) -> usize {
        self.rows()
            .map(|r| r.iter().filter(|&&b| b == 1).count())
            .max()
            .unwrap_or(0)
    }

    pub fn has_duplicate_rows(&self) -> bool {
        let mut seen = HashSet::new();
        self.rows().any(|r| !seen.insert(r))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.num_sets {
            return Err(Error::invalid(format!(
                "{} labels for {} sets",
                labels.len(),
                self.num_sets
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    /// Removes repeated rows, keeping the first occurrence (and its label).
    pub fn dedup(self) -> Self {
        let g = self.ground_size;
        let mut seen: HashSet<&[u8]> = HashSet::with_capacity(self.num_sets);
        let mut keep = Vec::with_capacity(self.num_sets);
        for i in 0..self.num_sets {
            if seen.insert(&self.bits[i * g..(i + 1) * g]) {
                keep.push(i);
            }
        }
        if keep.len() == self.num_sets {
            return self;
        }
        let mut bits = Vec::with_capacity(keep.len() * g);
        for &i in &keep {
            bits.extend_from_slice(&self.bits[i * g..(i + 1) * g]);
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| keep.iter().map(|&i| l[i].clone()).collect());
        SetSystem {
            ground_size: g,
            num_sets: keep.len(),
            bits,
            labels,
        }
    }

    /// Drops sets with no elements.
    pub fn without_empty_sets(self) -> Self {
        let keep: Vec<usize> = (0..self.num_sets)
            .filter(|&i| self.row(i).contains(&1))
            .collect();
        self.select(&keep)
    }

    pub(crate) fn select(&self, keep: &[usize]) -> Self {
        let mut bits = Vec::with_capacity(keep.len() * self.ground_size);
        for &i in keep {
            bits.extend_from_slice(self.row(i));
        }
        SetSystem {
            ground_size: self.ground_size,
            num_sets: keep.len(),
            bits,
            labels: self
                .labels
                .as_ref()
                .map(|l| keep.iter().map(|&i| l[i].clone()).collect()),
        }
    }

    pub(crate) fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Serializes in the matrix text format, preceded by a `# labels:` block
    /// when labels are present.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(labels) = &self.labels {
            out.push_str("# labels:\n");
            for l in labels {
                out.push_str("# ");
                out.push_str(l);
                out.push('\n');
            }
        }
        out.push_str(&write_matrix(&self.incidence::<f64>()));
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut labels: Option<Vec<String>> = None;
        let mut in_block = false;
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if !line.starts_with('#') {
                break;
            }
            if line.trim_start_matches('#').trim() == "labels:" && labels.is_none() {
                labels = Some(Vec::new());
                in_block = true;
                continue;
            }
            if in_block {
                let body = line.strip_prefix('#').unwrap_or(line);
                let body = body.strip_prefix(' ').unwrap_or(body);
                labels.as_mut().expect("block open").push(body.to_string());
            }
        }
        let sys = Self::from_incidence(&parse_matrix::<f64>(text)?)?;
        match labels {
            Some(l) => sys.with_labels(l),
            None => Ok(sys),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_binary_incidence() {
        let a: Matrix<f64> = Matrix::from_f64(&[&[1.0, 2.0]]);
        assert!(SetSystem::from_incidence(&a).is_err());
    }

    #[test]
    fn dedup_keeps_first_and_labels() {
        let s = SetSystem::from_sets(3, &[vec![0], vec![1, 2], vec![0]])
            .unwrap()
            .with_labels(vec!["a".into(), "b".into(), "c".into()])
            .unwrap()
            .dedup();
        assert_eq!(s.num_sets(), 2);
        assert_eq!(s.labels().unwrap(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn text_round_trip_with_labels() {
        let s = SetSystem::from_sets(2, &[vec![], vec![0, 1]])
            .unwrap()
            .with_labels(vec!["{}".into(), "{1,2}".into()])
            .unwrap();
        let text = s.to_text();
        assert!(text.starts_with("# labels:\n# {}\n"));
        assert_eq!(SetSystem::from_text(&text).unwrap(), s);
        let wrong = "# labels:\n# only-one\n2 1\n1\n0\n";
        assert!(SetSystem::from_text(wrong).is_err());
    }

    #[test]
    fn out_of_range_element() {
        assert!(SetSystem::from_sets(2, &[vec![2]]).is_err());
    }
}
