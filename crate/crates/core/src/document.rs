//! The JSON fan file format and the built-in example fans.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{validate_fan, Cone, Fan};
use crate::ratlinalg::{is_primitive_ints, primitive_ints, Int};

pub const FORMAT_VERSION: &str = "1";

/// `{"format_version":"1","rank":n,"rays":[[...]],"max_cones":[[...]],"name":...}`
/// with 0-based ray indices in `max_cones`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub format_version: String,
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedFan {
    pub fan: Fan,
    pub name: Option<String>,
    pub warnings: Vec<String>,
}

impl FanDocument {
    pub fn from_fan(fan: &Fan, name: Option<&str>) -> Result<FanDocument> {
        let rays = fan
            .rays()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| i64::try_from(x).map_err(|_| Error::Overflow))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FanDocument {
            format_version: FORMAT_VERSION.into(),
            rank: fan.rank(),
            rays,
            max_cones: fan.max_cones().iter().map(|c| c.indices().to_vec()).collect(),
            name: name.map(str::to_owned),
        })
    }

    /// Checks the document and builds the fan, which must pass
    /// [`validate_fan`]. Non-primitive rays are replaced by their primitive
    /// generators with a warning, or rejected when `strict`.
    pub fn into_fan(self, strict: bool) -> Result<ParsedFan> {
        let parsed = self.into_unvalidated(strict)?;
        let report = validate_fan(&parsed.fan);
        if !report.is_valid() {
            return Err(Error::InvalidFan(report.problems.join("; ")));
        }
        Ok(parsed)
    }

    /// Like [`FanDocument::into_fan`], but checks only the shape of the data.
    pub fn into_unvalidated(self, strict: bool) -> Result<ParsedFan> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "format_version: expected \"{FORMAT_VERSION}\", found \"{}\"",
                self.format_version
            )));
        }
        let mut warnings = Vec::new();
        let mut rays: Vec<Vec<Int>> = Vec::with_capacity(self.rays.len());
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != self.rank {
                return Err(Error::Parse(format!(
                    "rays[{i}]: expected {} coordinates, found {}",
                    self.rank,
                    r.len()
                )));
            }
            if r.iter().all(|&x| x == 0) {
                return Err(Error::Parse(format!("rays[{i}]: zero vector")));
            }
            let v: Vec<Int> = r.iter().map(|&x| Int::from(x)).collect();
            let v = if is_primitive_ints(&v) {
                v
            } else {
                let p = primitive_ints(&v);
                let msg = format!("rays[{i}] = {} normalized to {}", show(&v), show(&p));
                if strict {
                    return Err(Error::Parse(format!("{msg} (strict mode rejects non-primitive rays)")));
                }
                warnings.push(msg);
                p
            };
            if let Some(j) = rays.iter().position(|w| w == &v) {
                return Err(Error::Parse(format!("rays[{i}]: duplicate of rays[{j}]")));
            }
            rays.push(v);
        }
        let mut cones = Vec::with_capacity(self.max_cones.len());
        for (k, c) in self.max_cones.iter().enumerate() {
            if let Some(&i) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::Parse(format!(
                    "max_cones[{k}]: ray index {i} out of range (there are {} rays)",
                    rays.len()
                )));
            }
            let cone = Cone::new(c.clone());
            if cone.dim() != c.len() {
                return Err(Error::Parse(format!("max_cones[{k}]: repeated ray index")));
            }
            cones.push(cone);
        }
        let fan = Fan::from_parts(self.rank, rays, cones)?;
        Ok(ParsedFan {
            fan,
            name: self.name,
            warnings,
        })
    }
}

fn show(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Parses a fan file. Syntax errors carry the line and column.
pub fn parse_fan(text: &str, strict: bool) -> Result<ParsedFan> {
    parse_document(text)?.into_fan(strict)
}

pub fn parse_document(text: &str) -> Result<FanDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn serialize_fan(fan: &Fan, name: Option<&str>) -> Result<String> {
    let doc = FanDocument::from_fan(fan, name)?;
    Ok(serde_json::to_string_pretty(&doc).expect("documents serialize"))
}

pub const BUILTIN_NAMES: [&str; 5] = ["p2", "p1p1", "p1p1p1", "f1", "paper-example"];

/// A short description of each builtin, for listings.
pub fn builtin_description(name: &str) -> Option<&'static str> {
    Some(match name {
        "p2" => "the projective plane",
        "p1p1" => "P¹ × P¹",
        "p1p1p1" => "P¹ × P¹ × P¹",
        "f1" => "the blow-up of P² at a point",
        "paper-example" => "P(O(3) ⊕ O) over P² blown up at three points of a section (8 rays, 12 cones)",
        _ => return None,
    })
}

pub fn builtin_document(name: &str) -> Option<FanDocument> {
    let (rank, rays, cones): (usize, Vec<Vec<i64>>, Vec<Vec<usize>>) = match name {
        "p2" => (
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![0, 2], vec![1, 2]],
        ),
        "p1p1" => (
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        ),
        "p1p1p1" => {
            let rays = vec![
                vec![1, 0, 0],
                vec![-1, 0, 0],
                vec![0, 1, 0],
                vec![0, -1, 0],
                vec![0, 0, 1],
                vec![0, 0, -1],
            ];
            let mut cones = Vec::new();
            for a in 0..2 {
                for b in 2..4 {
                    for c in 4..6 {
                        cones.push(vec![a, b, c]);
                    }
                }
            }
            (3, rays, cones)
        }
        "f1" => (
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1], vec![1, 1]],
            vec![vec![0, 3], vec![1, 3], vec![0, 2], vec![1, 2]],
        ),
        "paper-example" => (
            3,
            vec![
                vec![1, 1, -1],
                vec![-1, 0, -1],
                vec![0, -1, -1],
                vec![1, 0, -1],
                vec![0, 1, -1],
                vec![-1, -1, -1],
                vec![0, 0, -1],
                vec![0, 0, 1],
            ],
            [
                [1, 4, 8],
                [1, 5, 8],
                [2, 5, 8],
                [2, 6, 8],
                [3, 6, 8],
                [3, 4, 8],
                [1, 4, 5],
                [2, 5, 6],
                [3, 4, 6],
                [4, 5, 7],
                [5, 6, 7],
                [4, 6, 7],
            ]
            .iter()
            .map(|c| c.iter().map(|&i| i - 1).collect())
            .collect(),
        ),
        _ => return None,
    };
    Some(FanDocument {
        format_version: FORMAT_VERSION.into(),
        rank,
        rays,
        max_cones: cones,
        name: Some(name.into()),
    })
}

pub fn builtin(name: &str) -> Option<Fan> {
    builtin_document(name).map(|d| d.into_fan(true).expect("builtins are valid").fan)
}

/// Every builtin fan with its name.
pub fn builtins() -> Vec<(&'static str, Fan)> {
    BUILTIN_NAMES
        .iter()
        .map(|&n| (n, builtin(n).expect("listed builtin")))
        .collect()
}

/// The already-flopped fan of the eight-ray example: the three walls
/// `<v4,v5>`, `<v5,v6>`, `<v4,v6>` replaced so that `ρ7` is adjacent to
/// every ray except `ρ8`.
pub fn paper_example_flop() -> Fan {
    let f = builtin("paper-example").expect("builtin");
    let mut cones: Vec<Cone> = f
        .max_cones()
        .iter()
        .filter(|c| c.contains(7) || (!c.contains(6) && c.indices().iter().filter(|&&i| i >= 3).count() < 2))
        .cloned()
        .collect();
    for (e, a, b) in [(0, 3, 4), (1, 4, 5), (2, 3, 5)] {
        cones.push(Cone::new(vec![e, a, 6]));
        cones.push(Cone::new(vec![e, b, 6]));
    }
    Fan::new(3, f.rays().to_vec(), cones).expect("the flop is a fan")
}
