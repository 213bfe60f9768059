use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Edge as it appears in JSON: `[i, j]` or `[i, j, "label"]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeJson {
    Labelled(usize, usize, String),
    Plain(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<EdgeJson>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n,
            edges: g
                .edges
                .iter()
                .map(|e| EdgeJson::Labelled(e.u, e.v, e.label.clone()))
                .collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        let mut g = Graph::empty(j.n);
        for e in j.edges {
            match e {
                EdgeJson::Labelled(i, k, l) => g.add_edge(i, k, Some(&l))?,
                EdgeJson::Plain(i, k) => g.add_edge(i, k, None)?,
            }
        }
        Ok(g)
    }
}

impl Graph {
    /// Parses JSON, accepting either a bare graph object or any object with
    /// a `graph` field holding one.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        let v = match v.get("graph") {
            Some(inner) if v.get("n").is_none() => inner.clone(),
            _ => v,
        };
        Graph::try_from(serde_json::from_value::<GraphJson>(v)?)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson::from(self)).expect("graph json is serializable")
    }

    /// Edge-list text: a first record holding `n`, then one `i j [label]`
    /// record per edge. Records end at a newline or `;`, and `#` starts a
    /// comment.
    pub fn from_text(s: &str) -> Result<Self> {
        let mut records = s
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(|l| l.split(';'))
            .map(str::trim)
            .filter(|r| !r.is_empty());
        let head = records
            .next()
            .ok_or_else(|| Error::Parse("empty graph text".into()))?;
        let n = head
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("expected vertex count, found `{head}`")))?;
        let mut g = Graph::empty(n);
        for r in records {
            let fields: Vec<&str> = r.split_whitespace().collect();
            let vertex = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad vertex `{s}` in `{r}`")))
            };
            match fields.as_slice() {
                [i, j] => g.add_edge(vertex(i)?, vertex(j)?, None)?,
                [i, j, label] => g.add_edge(vertex(i)?, vertex(j)?, Some(label))?,
                _ => return Err(Error::Parse(format!("bad edge record `{r}`"))),
            }
        }
        Ok(g)
    }

    /// JSON when the input starts with `{`, edge-list text otherwise.
    pub fn parse_any(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            Self::from_json_str(s)
        } else {
            Self::from_text(s)
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in 1..=self.n {
            out.push_str(&format!("  {v};\n"));
        }
        for e in &self.edges {
            out.push_str(&format!("  {} -- {} [label=\"{}\"];\n", e.u, e.v, e.label));
        }
        out.push_str("}\n");
        out
    }
}
