//! Plain-text polytope format: `#` comments, a `d n` header, then `n` rows
//! of `d` integers.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::IntVector;
use crate::polytope::{LatticePolytope, LatticeRole};

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_row<T: std::str::FromStr>(line: usize, l: &str) -> Result<Vec<T>> {
    l.split_whitespace()
        .map(|tok| tok.parse().map_err(|_| Error::Parse { line, msg: format!("not an integer: `{tok}`") }))
        .collect()
}

pub fn parse_polytope(text: &str) -> Result<LatticePolytope> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
    let header: Vec<usize> = parse_row(hline, header)?;
    let &[d, n] = header.as_slice() else {
        return Err(Error::Parse { line: hline, msg: "header must be `d n`".into() });
    };
    if d == 0 {
        return Err(Error::Parse { line: hline, msg: "dimension must be positive".into() });
    }
    let mut points: Vec<IntVector> = Vec::with_capacity(n);
    let mut last = hline;
    for (line, l) in lines {
        if points.len() == n {
            return Err(Error::Parse { line, msg: format!("more than the declared {n} rows") });
        }
        let row: Vec<BigInt> = parse_row(line, l)?;
        if row.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: row.len() });
        }
        points.push(row);
        last = line;
    }
    if points.len() != n {
        return Err(Error::Parse { line: last, msg: format!("expected {n} rows, found {}", points.len()) });
    }
    LatticePolytope::new(d, points, LatticeRole::M)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn square() {
        let p = parse_polytope("2 4\n1 1\n1 -1\n-1 1\n-1 -1").unwrap();
        assert_eq!(p.vertices(), corpus::cube(2).vertices());
    }

    #[test]
    fn comments_duplicates_and_interior_points() {
        let text = "# a square\n\n2 6 # header\n1 1\n1 -1\n-1 1\n-1 -1\n1 1\n0 0\n";
        let p = parse_polytope(text).unwrap();
        assert_eq!(p.vertices().len(), 4);
    }

    #[test]
    fn round_trip() {
        for name in ["example1", "example2", "cross3"] {
            let p = corpus::get(name).unwrap();
            assert_eq!(parse_polytope(&p.to_text()).unwrap().vertices(), p.vertices());
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_polytope("2 4\n1 1\n1 -1\n-1 1"), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse_polytope("2 1\n1 1\n1 -1"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_polytope("2 2\n1 1\n1 x"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_polytope("2\n1 1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_polytope("# nothing"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_polytope("2 3\n1 1\n1 -1 0\n0 0"),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert!(matches!(parse_polytope("2 2\n1 1\n-1 -1"), Err(Error::NotFullDimensional { .. })));
    }
}
