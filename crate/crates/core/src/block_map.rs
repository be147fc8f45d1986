//! Sliding block codes given by their finite tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// A `k`-block code: a table from length-`k` source words to target symbols.
///
/// The declared memory only fixes which coordinate of the window the image is
/// written to; every algorithm treats the code as memory-free, which changes
/// the point map by a shift and nothing else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMap {
    k: usize,
    memory: usize,
    table: BTreeMap<Vec<String>, String>,
}

impl BlockMap {
    pub fn new(k: usize, memory: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidCode("block size must be at least 1".into()));
        }
        if memory >= k {
            return Err(Error::InvalidCode(format!("memory {memory} must be below block size {k}")));
        }
        Ok(Self { k, memory, table: BTreeMap::new() })
    }

    /// A 1-block map from `(source, target)` symbol pairs.
    pub fn one_block<S: AsRef<str>, T: AsRef<str>>(pairs: impl IntoIterator<Item = (S, T)>) -> Result<Self> {
        let mut map = Self::new(1, 0)?;
        for (s, t) in pairs {
            map.insert(vec![s.as_ref().to_string()], t.as_ref())?;
        }
        Ok(map)
    }

    /// The identity 1-block map on the vertices of `g`.
    pub fn identity(g: &DirectedGraph) -> Self {
        Self::one_block(g.names().iter().map(|n| (n, n))).expect("vertex names are distinct")
    }

    pub fn insert(&mut self, word: Vec<String>, image: impl Into<String>) -> Result<()> {
        if word.len() != self.k {
            return Err(Error::InvalidCode(format!(
                "word `{}` has length {}, expected {}",
                word.join(" "),
                word.len(),
                self.k
            )));
        }
        let image = image.into();
        if let Some(old) = self.table.get(&word) {
            if *old != image {
                return Err(Error::InvalidCode(format!("word `{}` mapped twice", word.join(" "))));
            }
            return Ok(());
        }
        self.table.insert(word, image);
        Ok(())
    }

    pub fn block_size(&self) -> usize {
        self.k
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn anticipation(&self) -> usize {
        self.k - 1 - self.memory
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn get(&self, word: &[String]) -> Option<&str> {
        self.table.get(word).map(String::as_str)
    }

    /// Image of a single symbol under a 1-block map.
    pub fn get_symbol(&self, symbol: &str) -> Option<&str> {
        debug_assert_eq!(self.k, 1);
        self.table.get(&[symbol.to_string()][..]).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[String], &str)> {
        self.table.iter().map(|(w, u)| (w.as_slice(), u.as_str()))
    }

    /// Parses the text format: a `k=<int> m=<int>` header, then one
    /// `v1 .. vk -> u` line per table entry. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map: Option<BlockMap> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::BlockMapParse { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some(current) = map.as_mut() else {
                map = Some(parse_header(line).map_err(err)?);
                continue;
            };
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| err("expected `v1 .. vk -> u`".into()))?;
            let word: Vec<String> = lhs.split_whitespace().map(str::to_string).collect();
            let image: Vec<&str> = rhs.split_whitespace().collect();
            if image.len() != 1 {
                return Err(err(format!("expected exactly one target symbol, found {}", image.len())));
            }
            if word.len() != current.k {
                return Err(err(format!("word has length {}, expected {}", word.len(), current.k)));
            }
            current.insert(word, image[0]).map_err(|e| err(e.to_string()))?;
        }
        map.ok_or(Error::BlockMapParse { line: 0, message: "missing `k=<int> m=<int>` header".into() })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("k={} m={}\n", self.k, self.memory);
        for (word, image) in &self.table {
            let _ = writeln!(out, "{} -> {}", word.join(" "), image);
        }
        out
    }
}

fn parse_header(line: &str) -> std::result::Result<BlockMap, String> {
    let mut k = None;
    let mut m = None;
    for field in line.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| format!("bad header field `{field}`"))?;
        let value: usize = value.parse().map_err(|_| format!("bad integer in `{field}`"))?;
        let slot = match key {
            "k" => &mut k,
            "m" => &mut m,
            _ => return Err(format!("unknown header field `{key}`")),
        };
        if slot.replace(value).is_some() {
            return Err(format!("repeated header field `{key}`"));
        }
    }
    match (k, m) {
        (Some(k), Some(m)) => BlockMap::new(k, m).map_err(|e| e.to_string()),
        _ => Err("header must be `k=<int> m=<int>`".into()),
    }
}
