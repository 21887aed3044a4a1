use crate::error::{Error, Result};

/// A bijection between vertices and positions `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ordering {
    perm: Vec<usize>,
    pos: Vec<usize>,
}

impl Ordering {
    pub fn identity(n: usize) -> Self {
        Ordering {
            perm: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    /// Builds an ordering from `perm[position] = vertex`.
    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in perm.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidParams(format!(
                    "ordering entry {v} out of range for n = {n}"
                )));
            }
            if pos[v] != usize::MAX {
                return Err(Error::InvalidParams(format!("vertex {v} appears twice")));
            }
            pos[v] = i;
        }
        Ok(Ordering { perm, pos })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Vertex at position `i`.
    #[inline]
    pub fn vertex_at(&self, i: usize) -> usize {
        self.perm[i]
    }

    /// Position of vertex `v`.
    #[inline]
    pub fn position_of(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn positions(&self) -> &[usize] {
        &self.pos
    }

    /// `n` on the first line, then the permutation in position order.
    pub fn to_text(&self) -> String {
        let body: Vec<String> = self.perm.iter().map(|v| v.to_string()).collect();
        format!("{}\n{}\n", self.perm.len(), body.join(" "))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing vertex count".into(),
        })?;
        let n: usize = header.parse().map_err(|_| Error::Parse {
            line: ln,
            msg: format!("expected vertex count, found {header:?}"),
        })?;
        let mut perm = Vec::with_capacity(n);
        for (ln, l) in lines {
            for tok in l.split_whitespace() {
                perm.push(tok.parse::<usize>().map_err(|_| Error::Parse {
                    line: ln,
                    msg: format!("bad vertex index {tok:?}"),
                })?);
            }
        }
        if perm.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        Ordering::from_perm(perm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_permutations() {
        assert!(Ordering::from_perm(vec![0, 0]).is_err());
        assert!(Ordering::from_perm(vec![0, 2]).is_err());
        let o = Ordering::from_perm(vec![2, 0, 1]).unwrap();
        assert_eq!(o.position_of(2), 0);
        assert_eq!(o.vertex_at(2), 1);
    }

    #[test]
    fn text_round_trip() {
        let o = Ordering::from_perm(vec![3, 1, 0, 2]).unwrap();
        assert_eq!(o.to_text(), "4\n3 1 0 2\n");
        assert_eq!(Ordering::parse(&o.to_text()).unwrap(), o);
        assert!(Ordering::parse("3\n0 1\n").is_err());
    }
}
