//! The line-oriented quiver file format.
//!
//! ```text
//! # comment
//! vertex v1
//! vertex v2
//! arrow a v1 v2
//! dim alpha 1,1
//! weight lambda 1,-1
//! ```
//!
//! Vertex declaration order fixes coordinates; arrow order fixes the order
//! of representation maps.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use kacv_core::quiver::{DimVector, Quiver, WeightVector};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverFile {
    pub path: Option<PathBuf>,
    pub quiver: Quiver,
    pub arrow_names: Vec<String>,
    pub dims: Vec<(String, DimVector)>,
    pub weights: Vec<(String, WeightVector)>,
}

impl QuiverFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let mut file = parse_quiver_file(&text)?;
        file.path = Some(path.to_path_buf());
        Ok(file)
    }

    pub fn vertex_names(&self) -> &[String] {
        self.quiver.labels()
    }

    /// A named dimension vector, or a literal list such as `1,2`.
    pub fn dim(&self, key: &str) -> Result<DimVector, CliError> {
        if let Some((_, d)) = self.dims.iter().find(|(n, _)| n == key) {
            return Ok(d.clone());
        }
        let entries =
            parse_list::<u32>(key).map_err(|_| CliError::Usage(format!("no dimension vector named {key}")))?;
        check_len(self.quiver.vertex_count(), entries.len(), key)?;
        Ok(DimVector::new(entries))
    }

    /// A named weight, or a literal list such as `1,-1`.
    pub fn weight(&self, key: &str) -> Result<WeightVector, CliError> {
        if let Some((_, w)) = self.weights.iter().find(|(n, _)| n == key) {
            return Ok(w.clone());
        }
        let entries = parse_list::<i64>(key).map_err(|_| CliError::Usage(format!("no weight named {key}")))?;
        check_len(self.quiver.vertex_count(), entries.len(), key)?;
        Ok(WeightVector::new(entries))
    }
}

fn check_len(expected: usize, got: usize, what: &str) -> Result<(), CliError> {
    if expected != got {
        return Err(CliError::Usage(format!("{what} has {got} entries, quiver has {expected} vertices")));
    }
    Ok(())
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, ()> {
    if s.is_empty() {
        return Err(());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| ())).collect()
}

fn err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { line, message: message.into() }
}

pub fn parse_quiver_file(text: &str) -> Result<QuiverFile, CliError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<(String, usize, usize)> = Vec::new();
    let mut dims: Vec<(usize, String, Vec<u32>)> = Vec::new();
    let mut weights: Vec<(usize, String, Vec<i64>)> = Vec::new();
    let mut names = HashSet::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let arity = |n: usize| {
            if words.len() == n {
                Ok(())
            } else {
                Err(err(line, format!("`{}` takes {} arguments, got {}", words[0], n - 1, words.len() - 1)))
            }
        };
        let mut declare = |kind: &str, name: &str| {
            if names.insert((kind.to_string(), name.to_string())) {
                Ok(())
            } else {
                Err(err(line, format!("duplicate {kind} name {name}")))
            }
        };
        let vertex = |name: &str| {
            vertices.iter().position(|v| v == name).ok_or_else(|| err(line, format!("unknown vertex {name}")))
        };
        match words[0] {
            "vertex" => {
                arity(2)?;
                declare("vertex", words[1])?;
                vertices.push(words[1].to_string());
            }
            "arrow" => {
                arity(4)?;
                declare("arrow", words[1])?;
                let (t, h) = (vertex(words[2])?, vertex(words[3])?);
                if t == h {
                    return Err(err(line, format!("arrow {} is a loop at {}", words[1], words[2])));
                }
                arrows.push((words[1].to_string(), t, h));
            }
            "dim" => {
                arity(3)?;
                declare("dim", words[1])?;
                let v = parse_list::<u32>(words[2])
                    .map_err(|_| err(line, format!("malformed dimension list {}", words[2])))?;
                dims.push((line, words[1].to_string(), v));
            }
            "weight" => {
                arity(3)?;
                declare("weight", words[1])?;
                let v = parse_list::<i64>(words[2])
                    .map_err(|_| err(line, format!("malformed weight list {}", words[2])))?;
                weights.push((line, words[1].to_string(), v));
            }
            other => return Err(err(line, format!("unknown declaration {other}"))),
        }
    }

    let n = vertices.len();
    let length = |line: usize, name: &str, got: usize| {
        if got == n {
            Ok(())
        } else {
            Err(err(line, format!("{name} has {got} entries, quiver has {n} vertices")))
        }
    };
    for (line, name, v) in &dims {
        length(*line, name, v.len())?;
    }
    for (line, name, v) in &weights {
        length(*line, name, v.len())?;
    }
    let pairs: Vec<(usize, usize)> = arrows.iter().map(|&(_, t, h)| (t, h)).collect();
    let quiver = Quiver::with_labels(vertices, &pairs)?;
    Ok(QuiverFile {
        path: None,
        quiver,
        arrow_names: arrows.into_iter().map(|(name, _, _)| name).collect(),
        dims: dims.into_iter().map(|(_, name, v)| (name, DimVector::new(v))).collect(),
        weights: weights.into_iter().map(|(_, name, v)| (name, WeightVector::new(v))).collect(),
    })
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Text that parses back to the same file contents.
pub fn render_quiver_file(file: &QuiverFile) -> String {
    let labels = file.quiver.labels();
    let mut out = String::new();
    for v in labels {
        out.push_str(&format!("vertex {v}\n"));
    }
    for (name, a) in file.arrow_names.iter().zip(file.quiver.arrows()) {
        out.push_str(&format!("arrow {name} {} {}\n", labels[a.tail], labels[a.head]));
    }
    for (name, d) in &file.dims {
        out.push_str(&format!("dim {name} {}\n", join(d.entries())));
    }
    for (name, w) in &file.weights {
        out.push_str(&format!("weight {name} {}\n", join(w.entries())));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const K2: &str = "vertex v1\nvertex v2\narrow a v1 v2\narrow b v1 v2 # second\n";

    #[test]
    fn parses_kronecker() {
        let f = parse_quiver_file(K2).unwrap();
        assert_eq!(f.quiver, Quiver::new(2, &[(0, 1), (0, 1)]).unwrap());
        assert_eq!(f.arrow_names, vec!["a", "b"]);
    }

    #[test]
    fn rejects_bad_files() {
        let loop_file = "vertex v1\narrow a v1 v1\n";
        assert!(matches!(parse_quiver_file(loop_file), Err(CliError::Parse { line: 2, .. })));
        let short = "vertex a\nvertex b\nvertex c\ndim d 1,1\n";
        assert!(matches!(parse_quiver_file(short), Err(CliError::Parse { line: 4, .. })));
        assert!(parse_quiver_file("vertex a\narrow x a b\n").is_err());
        assert!(parse_quiver_file("vertex a\nvertex a\n").is_err());
        assert!(parse_quiver_file("vertex a\ndim d 1,x\n").is_err());
        assert!(parse_quiver_file("vertex a\ndim d 1\ndim d 1\n").is_err());
        assert!(parse_quiver_file("edge a b\n").is_err());
    }

    #[test]
    fn lookups() {
        let f = parse_quiver_file(&format!("{K2}dim alpha 1,1\nweight w 1,-1\n")).unwrap();
        assert_eq!(f.dim("alpha").unwrap(), DimVector::new(vec![1, 1]));
        assert_eq!(f.dim("2,1").unwrap(), DimVector::new(vec![2, 1]));
        assert!(f.dim("1,1,1").is_err());
        assert!(f.dim("beta").is_err());
        assert_eq!(f.weight("w").unwrap(), WeightVector::new(vec![1, -1]));
    }

    #[test]
    fn round_trip() {
        let f = parse_quiver_file(&format!("{K2}dim alpha 1,1\nweight w 1,-1\n")).unwrap();
        let g = parse_quiver_file(&render_quiver_file(&f)).unwrap();
        assert_eq!(f, g);
    }
}
