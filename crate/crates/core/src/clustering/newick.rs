use std::collections::BTreeSet;

use super::ClusterError;

/// A parsed Newick node.
#[derive(Clone, Debug, PartialEq)]
pub struct NewickNode {
    pub label: Option<String>,
    pub length: Option<f64>,
    pub children: Vec<NewickNode>,
}

const SPECIAL: &[char] = &['(', ')', '[', ']', '\'', ':', ';', ',', ' ', '\t', '\n'];

pub(crate) fn quote_label(label: &str) -> String {
    if label.contains(SPECIAL) {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_string()
    }
}

impl NewickNode {
    pub fn leaf_labels(&self) -> Vec<String> {
        if self.children.is_empty() {
            return self.label.iter().cloned().collect();
        }
        self.children
            .iter()
            .flat_map(NewickNode::leaf_labels)
            .collect()
    }

    /// Sorted leaf-label sets of every internal node.
    pub fn clades(&self) -> BTreeSet<Vec<String>> {
        let mut out = BTreeSet::new();
        self.collect_clades(&mut out);
        out
    }

    fn collect_clades(&self, out: &mut BTreeSet<Vec<String>>) {
        if self.children.is_empty() {
            return;
        }
        let mut labels = self.leaf_labels();
        labels.sort();
        out.insert(labels);
        for c in &self.children {
            c.collect_clades(out);
        }
    }
}

/// Parses a single Newick tree terminated by `;`.
pub fn parse_newick(text: &str) -> Result<NewickNode, ClusterError> {
    let mut p = Parser {
        chars: text.trim().chars().collect(),
        pos: 0,
    };
    let node = p.node()?;
    p.expect(';')?;
    if p.pos != p.chars.len() {
        return Err(p.error("trailing input after ';'"));
    }
    Ok(node)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, msg: &str) -> ClusterError {
        ClusterError::Newick(format!("{msg} at offset {}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ClusterError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {c:?}")))
        }
    }

    fn node(&mut self) -> Result<NewickNode, ClusterError> {
        let mut children = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            loop {
                children.push(self.node()?);
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected ',' or ')'")),
                }
            }
        }
        let label = self.label()?;
        let length = if self.peek() == Some(':') {
            self.pos += 1;
            let start = self.pos;
            while self
                .peek()
                .is_some_and(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'))
            {
                self.pos += 1;
            }
            let s: String = self.chars[start..self.pos].iter().collect();
            Some(
                s.parse::<f64>()
                    .map_err(|_| self.error("bad branch length"))?,
            )
        } else {
            None
        };
        if children.is_empty() && label.is_none() {
            return Err(self.error("leaf without a label"));
        }
        Ok(NewickNode {
            label,
            length,
            children,
        })
    }

    fn label(&mut self) -> Result<Option<String>, ClusterError> {
        if self.peek() == Some('\'') {
            self.pos += 1;
            let mut s = String::new();
            loop {
                match self.peek() {
                    None => return Err(self.error("unterminated quoted label")),
                    Some('\'') if self.chars.get(self.pos + 1) == Some(&'\'') => {
                        s.push('\'');
                        self.pos += 2;
                    }
                    Some('\'') => {
                        self.pos += 1;
                        return Ok(Some(s));
                    }
                    Some(c) => {
                        s.push(c);
                        self.pos += 1;
                    }
                }
            }
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| !SPECIAL.contains(&c)) {
            self.pos += 1;
        }
        Ok((self.pos > start).then(|| self.chars[start..self.pos].iter().collect()))
    }
}
