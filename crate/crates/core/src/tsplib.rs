//! TSPLIB EUC_2D instance parsing and prefix subinstance extraction.

use std::io::BufRead;

use thiserror::Error;

use crate::model::Instance;

#[derive(Debug, Error)]
pub enum TsplibError {
    #[error("no NODE_COORD_SECTION in input")]
    MissingSection,
    #[error("unsupported EDGE_WEIGHT_TYPE: {0} (only EUC_2D is handled)")]
    UnsupportedWeightType(String),
    #[error("DIMENSION is {declared} but {found} coordinates were read")]
    DimensionMismatch { declared: usize, found: usize },
    #[error("malformed line: {0}")]
    MalformedLine(String),
    #[error("subinstance size {0} is below the minimum of 3")]
    NTooSmall(usize),
    #[error("subinstance size {n} exceeds instance dimension {dimension}")]
    NTooLarge { n: usize, dimension: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeWeightType {
    Euc2d,
}

/// A parsed TSPLIB file. File-local vertex ids are preserved in `coords`;
/// everything downstream indexes vertices 0..dimension-1 in file order.
#[derive(Debug, Clone)]
pub struct RawTsplibFile {
    pub name: String,
    pub dimension: usize,
    pub edge_weight_type: EdgeWeightType,
    pub coords: Vec<(i64, f64, f64)>,
}

/// How arc costs are derived from coordinates.
///
/// `Exact` keeps the plain Euclidean distance in double precision.
/// `NearestInteger` applies the TSPLIB EUC_2D convention of rounding each
/// distance to the nearest integer; it exists for interoperability only.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DistanceRounding {
    #[default]
    Exact,
    NearestInteger,
}

pub fn euclidean_cost(p: (f64, f64), q: (f64, f64)) -> f64 {
    let dx = p.0 - q.0;
    let dy = p.1 - q.1;
    (dx * dx + dy * dy).sqrt()
}

pub fn parse_tsplib<R: BufRead>(source: R) -> Result<RawTsplibFile, TsplibError> {
    let mut name = String::new();
    let mut dimension: Option<usize> = None;
    let mut weight_type: Option<String> = None;
    let mut in_coords = false;
    let mut coords: Vec<(i64, f64, f64)> = Vec::new();

    for line in source.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if in_coords {
            if line == "EOF" {
                break;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(TsplibError::MalformedLine(line.to_string()));
            }
            let id: i64 = fields[0]
                .parse()
                .map_err(|_| TsplibError::MalformedLine(line.to_string()))?;
            let x: f64 = fields[1]
                .parse()
                .map_err(|_| TsplibError::MalformedLine(line.to_string()))?;
            let y: f64 = fields[2]
                .parse()
                .map_err(|_| TsplibError::MalformedLine(line.to_string()))?;
            coords.push((id, x, y));
            continue;
        }
        if line == "NODE_COORD_SECTION" {
            in_coords = true;
            continue;
        }
        // Headers come space- or colon-separated.
        let (key, value) = match line.split_once(':') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => match line.split_once(char::is_whitespace) {
                Some((k, v)) => (k.trim(), v.trim()),
                None => (line, ""),
            },
        };
        match key {
            "NAME" => name = value.to_string(),
            "DIMENSION" => {
                dimension = Some(
                    value
                        .parse()
                        .map_err(|_| TsplibError::MalformedLine(line.to_string()))?,
                )
            }
            "EDGE_WEIGHT_TYPE" => weight_type = Some(value.to_string()),
            "TYPE" | "COMMENT" => {}
            other => eprintln!("warning: ignoring unknown TSPLIB header key {other:?}"),
        }
    }

    if !in_coords {
        return Err(TsplibError::MissingSection);
    }
    match weight_type.as_deref() {
        Some("EUC_2D") => {}
        Some(other) => return Err(TsplibError::UnsupportedWeightType(other.to_string())),
        None => return Err(TsplibError::UnsupportedWeightType("<missing>".to_string())),
    }
    let dimension =
        dimension.ok_or_else(|| TsplibError::MalformedLine("missing DIMENSION".to_string()))?;
    if coords.len() != dimension {
        return Err(TsplibError::DimensionMismatch {
            declared: dimension,
            found: coords.len(),
        });
    }

    Ok(RawTsplibFile {
        name,
        dimension,
        edge_weight_type: EdgeWeightType::Euc2d,
        coords,
    })
}

pub fn parse_tsplib_str(source: &str) -> Result<RawTsplibFile, TsplibError> {
    parse_tsplib(source.as_bytes())
}

pub fn parse_tsplib_path(path: &std::path::Path) -> Result<RawTsplibFile, TsplibError> {
    let file = std::fs::File::open(path)?;
    parse_tsplib(std::io::BufReader::new(file))
}

impl RawTsplibFile {
    /// Instance over the first `n` vertices in file order, with exact
    /// (unrounded) Euclidean costs.
    pub fn take_prefix(&self, n: usize) -> Result<Instance, TsplibError> {
        self.take_prefix_with(n, DistanceRounding::Exact)
    }

    pub fn take_prefix_with(
        &self,
        n: usize,
        rounding: DistanceRounding,
    ) -> Result<Instance, TsplibError> {
        if n < 3 {
            return Err(TsplibError::NTooSmall(n));
        }
        if n > self.dimension {
            return Err(TsplibError::NTooLarge {
                n,
                dimension: self.dimension,
            });
        }
        let coords: Vec<(f64, f64)> = self.coords[..n].iter().map(|&(_, x, y)| (x, y)).collect();
        Ok(Instance::from_coords_with(coords, rounding))
    }

    /// Serializes back to TSPLIB text. Coordinate values round-trip exactly
    /// (shortest representation that re-parses to the same float).
    pub fn to_tsplib_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("NAME: {}\n", self.name));
        out.push_str("TYPE: TSP\n");
        out.push_str(&format!("DIMENSION: {}\n", self.dimension));
        out.push_str("EDGE_WEIGHT_TYPE: EUC_2D\n");
        out.push_str("NODE_COORD_SECTION\n");
        for &(id, x, y) in &self.coords {
            out.push_str(&format!("{id} {x} {y}\n"));
        }
        out.push_str("EOF\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BERLIN52: &str = include_str!("../data/berlin52.tsp");

    #[test]
    fn parses_berlin52() {
        let f = parse_tsplib_str(BERLIN52).unwrap();
        assert_eq!(f.name, "berlin52");
        assert_eq!(f.dimension, 52);
        assert_eq!(f.coords[0], (1, 565.0, 575.0));
        assert_eq!(f.coords[51], (52, 1605.0, 650.0));
    }

    #[test]
    fn parses_synthetic_three_node_file() {
        let src = "NAME: tiny\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n";
        let f = parse_tsplib_str(src).unwrap();
        assert_eq!(f.dimension, 3);
        assert_eq!(f.coords, vec![(1, 0.0, 0.0), (2, 3.0, 0.0), (3, 0.0, 4.0)]);
    }

    #[test]
    fn missing_section_is_an_error() {
        let src = "NAME: broken\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\n";
        assert!(matches!(
            parse_tsplib_str(src),
            Err(TsplibError::MissingSection)
        ));
    }

    #[test]
    fn rejects_non_euc2d() {
        let src = "DIMENSION: 3\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n1 0 0\n2 1 0\n3 0 1\nEOF\n";
        assert!(matches!(
            parse_tsplib_str(src),
            Err(TsplibError::UnsupportedWeightType(t)) if t == "GEO"
        ));
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let src = "DIMENSION: 4\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 0\n3 0 1\nEOF\n";
        assert!(matches!(
            parse_tsplib_str(src),
            Err(TsplibError::DimensionMismatch {
                declared: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn rejects_malformed_coordinate() {
        let src = "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 x 0\n3 0 1\nEOF\n";
        assert!(matches!(
            parse_tsplib_str(src),
            Err(TsplibError::MalformedLine(_))
        ));
    }

    #[test]
    fn space_separated_headers_are_accepted() {
        let src = "NAME tiny\nDIMENSION 3\nEDGE_WEIGHT_TYPE EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n";
        assert_eq!(parse_tsplib_str(src).unwrap().dimension, 3);
    }

    #[test]
    fn euclidean_cost_basics() {
        assert_eq!(euclidean_cost((0.0, 0.0), (3.0, 4.0)), 5.0);
        assert_eq!(euclidean_cost((7.5, -2.0), (7.5, -2.0)), 0.0);
    }

    #[test]
    fn take_prefix_bounds() {
        let f = parse_tsplib_str(BERLIN52).unwrap();
        assert!(matches!(f.take_prefix(2), Err(TsplibError::NTooSmall(2))));
        assert!(matches!(
            f.take_prefix(53),
            Err(TsplibError::NTooLarge { n: 53, .. })
        ));
        assert_eq!(f.take_prefix(52).unwrap().n(), 52);
    }

    #[test]
    fn reserialization_round_trips_bit_exactly() {
        let f = parse_tsplib_str(BERLIN52).unwrap();
        let again = parse_tsplib_str(&f.to_tsplib_string()).unwrap();
        assert_eq!(f.coords, again.coords);
        assert_eq!(f.dimension, again.dimension);
    }
}
