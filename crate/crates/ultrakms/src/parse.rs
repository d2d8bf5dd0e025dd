//! Text format for ultragraphs and the built-in family selector.
//!
//! ```text
//! # comment
//! vertices: v u
//! edge e1 v -> u
//! edge e3 u -> v u
//! weight e1 2
//! ```
//!
//! The built-in selector `sec6(d=2, a=2)` loads the Section-6 family; its
//! parameters are returned alongside the graph so weight rules can be set up.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{EdgeId, FiniteEdge, FiniteGraph, GraphError, Ultragraph, VertexId};
use crate::scalar::Scalar;

/// Parses the line-based ultragraph format. `weight` lines populate
/// `Ultragraph::weights`.
pub fn load_ultragraph(input: &str) -> Result<Ultragraph, GraphError> {
    let mut vertex_names: Vec<String> = Vec::new();
    let mut edges: Vec<FiniteEdge> = Vec::new();
    let mut weights: BTreeMap<String, Scalar> = BTreeMap::new();

    let err = |line: usize, msg: &str| GraphError::Parse {
        line,
        msg: msg.to_string(),
    };

    for (lineno, raw) in input.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vertices:") {
            for name in rest.split_whitespace() {
                if vertex_names.iter().any(|n| n == name) {
                    return Err(err(lineno, &format!("duplicate vertex `{name}`")));
                }
                vertex_names.push(name.to_string());
            }
        } else if let Some(rest) = line.strip_prefix("edge ") {
            let (head, tail) = rest
                .split_once("->")
                .ok_or_else(|| err(lineno, "expected `edge <id> <src> -> <dst>...`"))?;
            let mut head_parts = head.split_whitespace();
            let ename = head_parts
                .next()
                .ok_or_else(|| err(lineno, "missing edge id"))?
                .to_string();
            let src = head_parts
                .next()
                .ok_or_else(|| err(lineno, "missing edge source"))?;
            if head_parts.next().is_some() {
                return Err(err(lineno, "unexpected token before `->`"));
            }
            if edges.iter().any(|e| e.name == ename) {
                return Err(err(lineno, &format!("duplicate edge `{ename}`")));
            }
            let source = vertex_index(&vertex_names, src)
                .ok_or_else(|| GraphError::UnknownVertex(src.to_string()))?;
            let mut range: BTreeSet<VertexId> = BTreeSet::new();
            for name in tail.split_whitespace() {
                let v = vertex_index(&vertex_names, name)
                    .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))?;
                range.insert(v);
            }
            if range.is_empty() {
                return Err(GraphError::EmptyRange(ename));
            }
            edges.push(FiniteEdge {
                name: ename,
                source,
                range,
            });
        } else if let Some(rest) = line.strip_prefix("weight ") {
            let mut parts = rest.split_whitespace();
            let ename = parts
                .next()
                .ok_or_else(|| err(lineno, "missing edge id"))?;
            let value: Scalar = parts
                .next()
                .ok_or_else(|| err(lineno, "missing weight value"))?
                .parse()
                .map_err(|_| err(lineno, "bad weight value"))?;
            weights.insert(ename.to_string(), value);
        } else {
            return Err(err(lineno, &format!("unrecognized line `{line}`")));
        }
    }

    let mut graph = Ultragraph::finite(FiniteGraph {
        vertex_names,
        edges,
    })?;
    for (ename, value) in weights {
        let e = graph.edge_by_name(&ename)?;
        graph.weights.insert(e, value);
    }
    Ok(graph)
}

fn vertex_index(names: &[String], name: &str) -> Option<VertexId> {
    names.iter().position(|n| n == name).map(VertexId)
}

/// Parameters of the built-in `sec6(d=..., a=...)` selector.
#[derive(Debug, Clone, PartialEq)]
pub struct Sec6Selector {
    pub d: Scalar,
    pub a: Scalar,
}

/// Parses `sec6(d=2, a=2)`. Returns `None` when the input is not a selector
/// (callers then treat it as a file path or inline graph text).
pub fn parse_sec6_selector(input: &str) -> Option<Result<Sec6Selector, GraphError>> {
    let input = input.trim();
    let rest = input.strip_prefix("sec6(")?;
    let rest = rest.strip_suffix(')')?;
    let mut d = None;
    let mut a = None;
    for part in rest.split(',') {
        let (key, value) = match part.split_once('=') {
            Some(kv) => kv,
            None => {
                return Some(Err(GraphError::Parse {
                    line: 1,
                    msg: format!("bad selector argument `{part}`"),
                }))
            }
        };
        let value: Scalar = match value.trim().parse() {
            Ok(v) => v,
            Err(_) => {
                return Some(Err(GraphError::Parse {
                    line: 1,
                    msg: format!("bad selector value `{value}`"),
                }))
            }
        };
        match key.trim() {
            "d" => d = Some(value),
            "a" => a = Some(value),
            other => {
                return Some(Err(GraphError::Parse {
                    line: 1,
                    msg: format!("unknown selector key `{other}`"),
                }))
            }
        }
    }
    match (d, a) {
        (Some(d), Some(a)) => Some(Ok(Sec6Selector { d, a })),
        _ => Some(Err(GraphError::Parse {
            line: 1,
            msg: "sec6 selector needs d= and a=".to_string(),
        })),
    }
}

/// Cylinder expression syntax: `(<edges> ; <base expr> ; <excluded edges>)`,
/// e.g. `(e1 ; B ; e4)`. The base expression uses the lattice grammar:
/// vertex and emitter names, `r(<edge>)`, `&` for intersection, `|` for
/// union, parentheses.
pub fn parse_base_expr(
    g: &Ultragraph,
    input: &str,
) -> Result<crate::graph::GeneralizedVertex, GraphError> {
    let mut parser = ExprParser {
        g,
        tokens: tokenize(input),
        pos: 0,
    };
    let gv = parser.union_expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(GraphError::Parse {
            line: 1,
            msg: format!("trailing input in base expression `{input}`"),
        });
    }
    Ok(gv)
}

fn tokenize(input: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in input.chars() {
        match c {
            '(' | ')' | '&' | '|' | ',' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

struct ExprParser<'a> {
    g: &'a Ultragraph,
    tokens: Vec<String>,
    pos: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(|s| s.as_str())
    }

    fn bump(&mut self) -> Option<String> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: &str) -> Result<(), GraphError> {
        match self.bump() {
            Some(t) if t == tok => Ok(()),
            other => Err(GraphError::Parse {
                line: 1,
                msg: format!("expected `{tok}`, got {other:?}"),
            }),
        }
    }

    fn union_expr(&mut self) -> Result<crate::graph::GeneralizedVertex, GraphError> {
        let mut acc = self.inter_expr()?;
        while self.peek() == Some("|") {
            self.bump();
            let rhs = self.inter_expr()?;
            acc = self.g.gv_union(&acc, &rhs);
        }
        Ok(acc)
    }

    fn inter_expr(&mut self) -> Result<crate::graph::GeneralizedVertex, GraphError> {
        let mut acc = self.atom()?;
        while self.peek() == Some("&") {
            self.bump();
            let rhs = self.atom()?;
            acc = self.g.gv_intersect(&acc, &rhs);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<crate::graph::GeneralizedVertex, GraphError> {
        let tok = self.bump().ok_or_else(|| GraphError::Parse {
            line: 1,
            msg: "unexpected end of base expression".to_string(),
        })?;
        if tok == "(" {
            let inner = self.union_expr()?;
            self.expect(")")?;
            return Ok(inner);
        }
        if tok == "r" {
            self.expect("(")?;
            let ename = self.bump().ok_or_else(|| GraphError::Parse {
                line: 1,
                msg: "missing edge name in r(...)".to_string(),
            })?;
            self.expect(")")?;
            let e: EdgeId = self.g.edge_by_name(&ename)?;
            return Ok(self.g.canonicalize_gv(&self.g.range(e)));
        }
        // emitter name, then vertex name
        for m in self.g.emitters() {
            if self.g.emitter_name(m) == tok {
                return Ok(crate::graph::GeneralizedVertex::from_emitter(m));
            }
        }
        let v = self.g.vertex_by_name(&tok)?;
        Ok(self
            .g
            .canonicalize_gv(&crate::graph::GeneralizedVertex::from_vertices([v])))
    }
}

/// Cylinder expression `(<edges> ; <base expr> ; <excluded edges>)`, e.g.
/// `(e1 ; B ; e4)`. The base must be a semi-ring shape: a single minimal
/// emitter (exclusions allowed) or a finite-emission set (no exclusions).
pub fn parse_cylinder(
    g: &Ultragraph,
    input: &str,
) -> Result<crate::shift::Cylinder, GraphError> {
    let err = |msg: String| GraphError::Parse { line: 1, msg };
    let inner = input
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| err(format!("cylinder expression must be parenthesized: `{input}`")))?;
    let parts: Vec<&str> = inner.split(';').collect();
    if parts.len() != 3 {
        return Err(err("expected `(<edges> ; <base> ; <excluded>)`".to_string()));
    }
    let mut stem = Vec::new();
    for name in parts[0].split_whitespace() {
        stem.push(g.edge_by_name(name)?);
    }
    let base = parse_base_expr(g, parts[1])?;
    let mut excluded = std::collections::BTreeSet::new();
    for name in parts[2].split_whitespace() {
        excluded.insert(g.edge_by_name(name)?);
    }
    let shape_err = |e: crate::shift::ShiftError| err(format!("invalid cylinder: {e}"));
    if base.emitters.len() == 1 && base.finite.is_empty() {
        let m = *base.emitters.iter().next().unwrap();
        crate::shift::Cylinder::emitter(g, stem, m, excluded).map_err(shape_err)
    } else if base.has_finite_emission() {
        if !excluded.is_empty() {
            return Err(err("exclusions need a minimal-emitter base".to_string()));
        }
        crate::shift::Cylinder::finite_base(g, stem, base).map_err(shape_err)
    } else {
        Err(err(
            "base must be a single minimal emitter or a finite-emission set".to_string(),
        ))
    }
}

/// Like [`parse_cylinder`] but accepts any base and forbids exclusions.
/// Used by refinement, which splits a general base into semi-ring pieces.
pub fn parse_general_cylinder(
    g: &Ultragraph,
    input: &str,
) -> Result<(Vec<crate::graph::EdgeId>, crate::graph::GeneralizedVertex), GraphError> {
    let err = |msg: String| GraphError::Parse { line: 1, msg };
    let inner = input
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| err(format!("cylinder expression must be parenthesized: `{input}`")))?;
    let parts: Vec<&str> = inner.split(';').collect();
    if parts.len() != 3 {
        return Err(err("expected `(<edges> ; <base> ; <excluded>)`".to_string()));
    }
    if !parts[2].trim().is_empty() {
        return Err(err("exclusions need a minimal-emitter base".to_string()));
    }
    let mut stem = Vec::new();
    for name in parts[0].split_whitespace() {
        stem.push(g.edge_by_name(name)?);
    }
    let base = parse_base_expr(g, parts[1])?;
    Ok((stem, base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SEC6_EMITTER_B;

    #[test]
    fn two_vertex_file() {
        let g = load_ultragraph(
            "# branching graph\nvertices: v u\nedge e1 v -> u\nedge e2 v -> u\nedge e3 u -> v\n",
        )
        .unwrap();
        assert_eq!(g.edge_count(), Some(3));
        assert_eq!(g.vertex_count(), Some(2));
    }

    #[test]
    fn sink_rejected() {
        let res = load_ultragraph("vertices: v u\nedge e1 v -> u\n");
        match res {
            Err(GraphError::SinkDetected(v)) => assert_eq!(v, "u"),
            other => panic!("expected sink error, got {other:?}"),
        }
    }

    #[test]
    fn weights_parsed() {
        let g = load_ultragraph(
            "vertices: v\nedge e v -> v\nweight e 2\n",
        )
        .unwrap();
        let e = g.edge_by_name("e").unwrap();
        assert_eq!(g.weights[&e], Scalar::from_int(2));
    }

    #[test]
    fn sec6_selector() {
        let sel = parse_sec6_selector("sec6(d=2, a=3/2)").unwrap().unwrap();
        assert_eq!(sel.d, Scalar::from_int(2));
        assert_eq!(sel.a, Scalar::ratio(3, 2));
        assert!(parse_sec6_selector("vertices: v").is_none());
    }

    #[test]
    fn cylinder_expr() {
        let g = Ultragraph::sec6();
        let c = parse_cylinder(&g, "(e1 ; B ; e4)").unwrap();
        assert_eq!(c.stem, vec![g.edge_by_name("e1").unwrap()]);
        assert_eq!(c.excluded.len(), 1);
        let c = parse_cylinder(&g, "( ; v1 | v2 ; )").unwrap();
        assert!(c.stem.is_empty());
        assert!(parse_cylinder(&g, "( ; v1 ; e1)").is_err());
        assert!(parse_cylinder(&g, "(e1 ; B | v1 ; )").is_err());
    }

    #[test]
    fn base_expr_grammar() {
        let g = Ultragraph::sec6();
        let gv = parse_base_expr(&g, "r(e1) & r(e2)").unwrap();
        assert_eq!(
            gv,
            crate::graph::GeneralizedVertex::from_emitter(SEC6_EMITTER_B)
        );
        let gv = parse_base_expr(&g, "B | v1 | v2").unwrap();
        assert_eq!(gv.finite.len(), 2);
        assert!(parse_base_expr(&g, "v1 &").is_err());
    }
}
