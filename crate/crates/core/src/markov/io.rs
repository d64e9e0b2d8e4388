//! TOML files for piecewise-linear tree maps.
//!
//! A file names the number of `vertices`, the `edges` as vertex pairs and,
//! for interval maps, the vertex `coordinates`. Each `[[pieces]]` table maps the
//! parameter range `domain` of `edge` linearly onto the range `image` of
//! `image_edge`; listed in order, the pieces of an edge trace its image path.
//! The optional `slope` is checked against the endpoints.

use serde::{Deserialize, Serialize};

use super::{MarkovError, MarkovTreeMap, Piece, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceEntry {
    pub edge: usize,
    pub domain: [String; 2],
    pub image_edge: usize,
    pub image: [String; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkovFile {
    pub vertices: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<String>>,
    pub edges: Vec<[usize; 2]>,
    pub pieces: Vec<PieceEntry>,
}

fn number(s: &str) -> Result<Rat, MarkovError> {
    s.trim()
        .parse()
        .map_err(|_| MarkovError::Parse(format!("token `{s}` is not a rational number")))
}

pub fn parse_markov_toml(text: &str) -> Result<MarkovTreeMap, MarkovError> {
    let raw: MarkovFile = toml::from_str(text).map_err(|e| MarkovError::Parse(e.to_string()))?;
    let coordinates = raw
        .coordinates
        .as_ref()
        .map(|xs| xs.iter().map(|x| number(x)).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    let mut pieces = Vec::with_capacity(raw.pieces.len());
    for p in &raw.pieces {
        let piece = Piece {
            edge: p.edge,
            s0: number(&p.domain[0])?,
            s1: number(&p.domain[1])?,
            image_edge: p.image_edge,
            t0: number(&p.image[0])?,
            t1: number(&p.image[1])?,
        };
        if piece.s0 >= piece.s1 {
            return Err(MarkovError::Invalid(format!(
                "empty domain [{}, {}] on e{}",
                piece.s0, piece.s1, piece.edge
            )));
        }
        if let Some(s) = &p.slope {
            if number(s)? != piece.slope() {
                return Err(MarkovError::Invalid(format!(
                    "slope {s} on e{} does not match its endpoints ({})",
                    piece.edge,
                    piece.slope()
                )));
            }
        }
        pieces.push(piece);
    }
    MarkovTreeMap::new(
        raw.vertices,
        raw.edges.iter().map(|&[a, b]| (a, b)).collect(),
        coordinates,
        pieces,
    )
}

pub fn write_markov_toml(f: &MarkovTreeMap) -> String {
    let file = MarkovFile {
        vertices: f.tree().len(),
        coordinates: f
            .coordinates()
            .map(|xs| xs.iter().map(|x| x.to_string()).collect()),
        edges: f.edges().iter().map(|&(a, b)| [a, b]).collect(),
        pieces: f
            .pieces()
            .iter()
            .map(|p| PieceEntry {
                edge: p.edge,
                domain: [p.s0.to_string(), p.s1.to_string()],
                image_edge: p.image_edge,
                image: [p.t0.to_string(), p.t1.to_string()],
                slope: Some(p.slope().to_string()),
            })
            .collect(),
    };
    toml::to_string(&file).expect("map files serialize")
}
