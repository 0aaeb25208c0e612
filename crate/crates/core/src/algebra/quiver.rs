use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite acyclic quiver. Vertices are referred to by index; labels are for display and I/O.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawQuiver", into = "RawQuiver")]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

#[derive(Serialize, Deserialize)]
struct RawQuiver {
    vertices: Vec<String>,
    arrows: Vec<RawArrow>,
}

#[derive(Serialize, Deserialize)]
struct RawArrow {
    name: String,
    source: String,
    target: String,
}

impl TryFrom<RawQuiver> for Quiver {
    type Error = Error;
    fn try_from(raw: RawQuiver) -> Result<Quiver> {
        let find = |label: &str| {
            raw.vertices.iter().position(|v| v == label).ok_or_else(|| Error::UnknownVertex(label.to_string()))
        };
        let arrows = raw
            .arrows
            .iter()
            .map(|a| Ok(Arrow { name: a.name.clone(), source: find(&a.source)?, target: find(&a.target)? }))
            .collect::<Result<Vec<_>>>()?;
        Quiver::new(raw.vertices, arrows)
    }
}

impl From<Quiver> for RawQuiver {
    fn from(q: Quiver) -> RawQuiver {
        let arrows = q
            .arrows
            .iter()
            .map(|a| RawArrow {
                name: a.name.clone(),
                source: q.vertices[a.source].clone(),
                target: q.vertices[a.target].clone(),
            })
            .collect();
        RawQuiver { vertices: q.vertices, arrows }
    }
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Quiver> {
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.as_str(), i).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate vertex label {v:?}")));
            }
        }
        let mut names = HashMap::new();
        for a in &arrows {
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(Error::InvalidQuiver(format!("arrow {:?} has an endpoint outside the vertex list", a.name)));
            }
            if names.insert(a.name.as_str(), ()).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate arrow name {:?}", a.name)));
            }
        }
        let q = Quiver { vertices, arrows };
        if let Some(cycle) = q.find_cycle() {
            return Err(Error::CyclicQuiver(cycle.into_iter().map(|v| q.vertices[v].clone()).collect()));
        }
        Ok(q)
    }

    /// Convenience constructor from `(name, source, target)` triples.
    pub fn from_edges(n: usize, edges: &[(&str, usize, usize)]) -> Result<Quiver> {
        let vertices = (0..n).map(|i| i.to_string()).collect();
        let arrows = edges.iter().map(|&(name, s, t)| Arrow { name: name.to_string(), source: s, target: t }).collect();
        Quiver::new(vertices, arrows)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v == label).ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    /// Number of arrows from `u` to `v`.
    pub fn arrow_count(&self, u: usize, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.source == u && a.target == v).count()
    }

    fn find_cycle(&self) -> Option<Vec<usize>> {
        // colours: 0 unvisited, 1 on stack, 2 done
        let n = self.vertices.len();
        let mut colour = vec![0u8; n];
        let mut stack: Vec<usize> = Vec::new();
        fn visit(q: &Quiver, v: usize, colour: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
            colour[v] = 1;
            stack.push(v);
            for a in q.arrows.iter().filter(|a| a.source == v) {
                match colour[a.target] {
                    1 => {
                        let start = stack.iter().position(|&x| x == a.target).expect("on stack");
                        return Some(stack[start..].to_vec());
                    }
                    0 => {
                        if let Some(c) = visit(q, a.target, colour, stack) {
                            return Some(c);
                        }
                    }
                    _ => {}
                }
            }
            stack.pop();
            colour[v] = 2;
            None
        }
        (0..n).find_map(|v| if colour[v] == 0 { visit(self, v, &mut colour, &mut stack) } else { None })
    }

    /// All paths, trivial ones first, then by length and arrow sequence.
    pub fn paths(&self) -> Vec<Path> {
        let mut out: Vec<Path> = (0..self.vertices.len()).map(|v| Path { source: v, target: v, arrows: Vec::new() }).collect();
        let mut frontier: Vec<Path> =
            self.arrows.iter().enumerate().map(|(i, a)| Path { source: a.source, target: a.target, arrows: vec![i] }).collect();
        while !frontier.is_empty() {
            frontier.sort_by(|a, b| a.arrows.cmp(&b.arrows));
            let mut next = Vec::new();
            for p in &frontier {
                for (i, a) in self.arrows.iter().enumerate() {
                    if a.source == p.target {
                        let mut arrows = p.arrows.clone();
                        arrows.push(i);
                        next.push(Path { source: p.source, target: a.target, arrows });
                    }
                }
            }
            out.append(&mut frontier);
            frontier = next;
        }
        out
    }
}

/// A path read left to right: first `arrows[0]`, then `arrows[1]`, ...
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn label(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e_{}", q.vertices[self.source])
        } else {
            self.arrows.iter().map(|&a| q.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_is_named() {
        let err = Quiver::from_edges(3, &[("a", 0, 1), ("b", 1, 2), ("c", 2, 1)]).unwrap_err();
        assert_eq!(err, Error::CyclicQuiver(vec!["1".into(), "2".into()]));
        assert!(Quiver::from_edges(1, &[("loop", 0, 0)]).is_err());
    }

    #[test]
    fn path_counts() {
        assert_eq!(Quiver::from_edges(1, &[]).unwrap().paths().len(), 1);
        assert_eq!(Quiver::from_edges(2, &[("a", 0, 1)]).unwrap().paths().len(), 3);
        assert_eq!(Quiver::from_edges(3, &[("a", 0, 1), ("b", 0, 2)]).unwrap().paths().len(), 5);
        assert_eq!(Quiver::from_edges(3, &[("a", 0, 1), ("b", 1, 2)]).unwrap().paths().len(), 6);
    }
}
