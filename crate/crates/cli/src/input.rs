use std::fs;
use std::path::Path;

use esz_core::geometry::{check_general_position, parse_point_set, shear_distinct_x, validate};
use esz_core::{Error, PointSet, Rational, ValidationError};
use sha2::{Digest, Sha256};

use crate::CliError;

/// A validated point set with where each point came from.
pub struct Loaded {
    pub set: PointSet,
    /// Source line of each point, in x-sorted order.
    pub lines: Vec<usize>,
    pub digest: String,
    /// Shear applied to make x-coordinates distinct, if any.
    pub shear: Option<Rational>,
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| CliError::Io(format!("{}: not UTF-8", path.display())))?;
    let mut parsed = parse_point_set(&text)?;
    parsed.sort_by(|a, b| a.point.cmp(&b.point));
    let lines: Vec<usize> = parsed.iter().map(|p| p.line).collect();
    let set = PointSet::new(parsed.into_iter().map(|p| p.point).collect());
    check_general_position(&set).map_err(|e| on_lines(e, &lines))?;
    let (set, shear) = match validate(&set) {
        Ok(()) => (set, None),
        Err(ValidationError::DuplicateX { .. }) => {
            let (sheared, eps) = shear_distinct_x(&set);
            (sheared, Some(eps))
        }
        Err(e) => return Err(on_lines(e, &lines)),
    };
    Ok(Loaded { set, lines, digest, shear })
}

fn on_lines(e: ValidationError, lines: &[usize]) -> CliError {
    let message = match &e {
        ValidationError::DuplicatePoint { first, second } => {
            format!("duplicate point on lines {} and {}", lines[*first], lines[*second])
        }
        ValidationError::CollinearTriple { p, q, r } => {
            let mut l = [lines[*p], lines[*q], lines[*r]];
            l.sort_unstable();
            format!("collinear triple on lines {}, {}, {}", l[0], l[1], l[2])
        }
        ValidationError::DuplicateX { first, second } => {
            format!("equal x-coordinate on lines {} and {}", lines[*first], lines[*second])
        }
    };
    CliError::Core { error: Error::Validation(e), message }
}
