//! Dataset and Hamiltonian file ingestion.

use std::fs;
use std::path::Path;

use crate::qsim::{Pauli, PauliHamiltonian, PauliTerm};

use super::TaskError;

/// Feature rows with numeric labels (class indices, or ±1 after filtering).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Parse an Iris-style CSV: four decimal feature columns plus a class
/// string. A header row is skipped if its first field is non-numeric.
///
/// Without a filter, labels are class indices in order of first appearance.
/// With `filter = Some((a, b))`, only rows of those two classes are kept and
/// mapped to −1 (`a`) and +1 (`b`).
pub fn load_iris(path: &Path, filter: Option<(&str, &str)>) -> Result<Dataset, TaskError> {
    let text = fs::read_to_string(path)?;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut class_order: Vec<String> = Vec::new();
    let mut seen_filter = (false, false);

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if idx == 0 && fields[0].parse::<f64>().is_err() {
            continue; // header
        }
        if fields.len() != 5 {
            return Err(TaskError::ParseError {
                line: line_no,
                msg: format!("expected 5 comma-separated fields, found {}", fields.len()),
            });
        }
        let mut row = Vec::with_capacity(4);
        for f in &fields[..4] {
            let v: f64 = f.parse().map_err(|_| TaskError::ParseError {
                line: line_no,
                msg: format!("bad numeric field {f:?}"),
            })?;
            if !v.is_finite() {
                return Err(TaskError::ParseError {
                    line: line_no,
                    msg: format!("non-finite value {f:?}"),
                });
            }
            row.push(v);
        }
        let class = fields[4];
        match filter {
            Some((a, b)) => {
                let label = if class == a {
                    seen_filter.0 = true;
                    -1.0
                } else if class == b {
                    seen_filter.1 = true;
                    1.0
                } else {
                    continue;
                };
                features.push(row);
                labels.push(label);
            }
            None => {
                let pos = class_order.iter().position(|c| c == class).unwrap_or_else(|| {
                    class_order.push(class.to_string());
                    class_order.len() - 1
                });
                features.push(row);
                labels.push(pos as f64);
            }
        }
    }

    if let Some((a, b)) = filter {
        if !seen_filter.0 {
            return Err(TaskError::UnknownClass(a.to_string()));
        }
        if !seen_filter.1 {
            return Err(TaskError::UnknownClass(b.to_string()));
        }
    }
    Ok(Dataset { features, labels })
}

/// Parse a Pauli Hamiltonian file: one `<coefficient> <word>` pair per line,
/// `#` comments and blank lines allowed, all words the same length.
pub fn load_hamiltonian(path: &Path) -> Result<PauliHamiltonian, TaskError> {
    let text = fs::read_to_string(path)?;
    let mut terms: Vec<PauliTerm> = Vec::new();
    let mut word_len: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(coeff_str), Some(word_str), None) = (parts.next(), parts.next(), parts.next())
        else {
            return Err(TaskError::ParseError {
                line: line_no,
                msg: "expected `<coefficient> <pauli word>`".into(),
            });
        };
        let coeff: f64 = coeff_str.parse().map_err(|_| TaskError::ParseError {
            line: line_no,
            msg: format!("bad coefficient {coeff_str:?}"),
        })?;
        if !coeff.is_finite() {
            return Err(TaskError::ParseError {
                line: line_no,
                msg: format!("non-finite coefficient {coeff_str:?}"),
            });
        }
        let word: Option<Vec<Pauli>> = word_str.chars().map(Pauli::from_char).collect();
        let word = word.ok_or_else(|| TaskError::ParseError {
            line: line_no,
            msg: format!("bad Pauli word {word_str:?} (letters must be I/X/Y/Z)"),
        })?;
        match word_len {
            None => word_len = Some(word.len()),
            Some(l) if l != word.len() => {
                return Err(TaskError::InconsistentWordLength(l, word.len()));
            }
            _ => {}
        }
        terms.push(PauliTerm { coeff, word });
    }
    Ok(PauliHamiltonian { terms })
}
