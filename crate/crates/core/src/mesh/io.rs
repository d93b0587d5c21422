//! The `vempoly` text format.
//!
//! ```text
//! vempoly 1
//! nv <count>
//! <x> <y>            one line per vertex
//! nc <count>
//! <m> <i1> ... <im>  one line per cell, 0-based counterclockwise indices
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. Coordinates are
//! written with 17 significant digits so a round trip is exact.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{MeshError, Point, PolygonalMesh};
use crate::format::fmt_g17;

pub fn write_vempoly<W: Write>(mesh: &PolygonalMesh, mut out: W) -> std::io::Result<()> {
    writeln!(out, "vempoly 1")?;
    writeln!(out, "nv {}", mesh.n_vertices())?;
    for p in mesh.vertices() {
        writeln!(out, "{} {}", fmt_g17(p[0]), fmt_g17(p[1]))?;
    }
    writeln!(out, "nc {}", mesh.n_cells())?;
    for cell in mesh.cells() {
        write!(out, "{}", cell.len())?;
        for v in cell {
            write!(out, " {v}")?;
        }
        writeln!(out)?;
    }
    out.flush()
}

pub fn save(mesh: &PolygonalMesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    write_vempoly(mesh, BufWriter::new(File::create(path)?))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<PolygonalMesh, MeshError> {
    read_vempoly(BufReader::new(File::open(path)?))
}

pub fn read_vempoly<R: BufRead>(input: R) -> Result<PolygonalMesh, MeshError> {
    let mut lines = Lines::new(input);
    let (n, header) = lines.next_content()?;
    if header.split_whitespace().collect::<Vec<_>>() != ["vempoly", "1"] {
        return Err(parse_err(n, "expected header `vempoly 1`"));
    }
    let nv = lines.count("nv")?;
    let mut vertices: Vec<Point> = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, line) = lines.next_content()?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(n, "expected two coordinates"));
        }
        let coord = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| parse_err(n, &format!("invalid coordinate `{s}`")))
        };
        vertices.push([coord(fields[0])?, coord(fields[1])?]);
    }
    let nc = lines.count("nc")?;
    let mut cells = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (n, line) = lines.next_content()?;
        let ints = line
            .split_whitespace()
            .map(|s| s.parse::<usize>().map_err(|_| parse_err(n, &format!("invalid index `{s}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let Some((&m, idx)) = ints.split_first() else {
            return Err(parse_err(n, "empty cell line"));
        };
        if idx.len() != m {
            return Err(parse_err(n, &format!("cell declares {m} vertices, lists {}", idx.len())));
        }
        if let Some(&bad) = idx.iter().find(|&&v| v >= nv) {
            return Err(parse_err(n, &format!("vertex index {bad} out of range (nv = {nv})")));
        }
        cells.push(idx.to_vec());
    }
    if let Some((n, _)) = lines.try_next_content()? {
        return Err(parse_err(n, "unexpected content after cells"));
    }
    PolygonalMesh::new(vertices, cells)
}

fn parse_err(line: usize, reason: &str) -> MeshError {
    MeshError::Parse { line, reason: reason.to_string() }
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    number: usize,
}

impl<R: BufRead> Lines<R> {
    fn new(input: R) -> Self {
        Self { inner: input.lines(), number: 0 }
    }

    fn try_next_content(&mut self) -> Result<Option<(usize, String)>, MeshError> {
        for line in self.inner.by_ref() {
            self.number += 1;
            let line = line?;
            let trimmed = line.trim();
            if !trimmed.is_empty() && !trimmed.starts_with('#') {
                return Ok(Some((self.number, trimmed.to_string())));
            }
        }
        Ok(None)
    }

    fn next_content(&mut self) -> Result<(usize, String), MeshError> {
        self.try_next_content()?
            .ok_or_else(|| parse_err(self.number + 1, "unexpected end of file"))
    }

    fn count(&mut self, keyword: &str) -> Result<usize, MeshError> {
        let (n, line) = self.next_content()?;
        match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            [k, v] if *k == keyword => {
                v.parse().map_err(|_| parse_err(n, &format!("invalid count `{v}`")))
            }
            _ => Err(parse_err(n, &format!("expected `{keyword} <count>`"))),
        }
    }
}
