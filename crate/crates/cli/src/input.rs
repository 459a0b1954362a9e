//! Reading structures, vertex lists and class specs from the command line.

use std::fs;
use std::io::Read;
use std::path::Path;

use hk_core::classes::GrowthFunction;
use hk_core::{ClassKind, ClassSpec, Graph, Orientation, Structure, VertexId, VertexSet};
use serde::de::DeserializeOwned;

use crate::Failure;

pub fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("<stdin>: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read_text(path)?;
    let name = if path.as_os_str() == "-" { "<stdin>".to_string() } else { path.display().to_string() };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{name}: line {} column {}: {e}", e.line(), e.column())))
}

pub fn read_structure(path: &Path) -> Result<Structure, Failure> {
    read_json(path)
}

pub fn read_graph(path: &Path) -> Result<Graph, Failure> {
    match read_structure(path)? {
        Structure::Graph(g) => Ok(g),
        Structure::Oriented(_) => Err(Failure::Usage(format!("{}: expected a graph, found an orientation", path.display()))),
    }
}

pub fn read_orientation(path: &Path) -> Result<Orientation, Failure> {
    match read_structure(path)? {
        Structure::Oriented(o) => Ok(o),
        Structure::Graph(_) => Err(Failure::Usage(format!("{}: expected an orientation (with \"k\" and \"arcs\")", path.display()))),
    }
}

#[derive(Clone, Debug)]
pub struct Ids(pub Vec<VertexId>);

#[derive(Clone, Debug)]
pub struct Arcs(pub Vec<(VertexId, VertexId)>);

pub fn parse_ids(s: &str) -> Result<Ids, String> {
    split_ids(s).map(Ids)
}

fn split_ids(s: &str) -> Result<Vec<VertexId>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u32>().map(VertexId).map_err(|e| format!("bad vertex id {t:?}: {e}")))
        .collect()
}

pub fn parse_set(s: &str) -> Result<VertexSet, String> {
    split_ids(s).map(|v| v.into_iter().collect())
}

/// `u>v` pairs separated by commas.
pub fn parse_arcs(s: &str) -> Result<Arcs, String> {
    let arcs = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (u, v) = t.split_once('>').ok_or_else(|| format!("bad arc {t:?}, expected u>v"))?;
            let p = |x: &str| x.trim().parse::<u32>().map(VertexId).map_err(|e| format!("bad vertex id {x:?}: {e}"));
            Ok((p(u)?, p(v)?))
        })
        .collect::<Result<_, String>>()?;
    Ok(Arcs(arcs))
}

/// A preset name, inline JSON, or a path to a JSON file.
pub fn growth(arg: &str) -> Result<GrowthFunction, Failure> {
    if let Some(f) = GrowthFunction::preset(arg) {
        return Ok(f);
    }
    let f: GrowthFunction = if arg.trim_start().starts_with('{') {
        serde_json::from_str(arg).map_err(|e| Failure::Usage(format!("--growth: column {}: {e}", e.column())))?
    } else {
        read_json(Path::new(arg))?
    };
    f.validate()?;
    Ok(f)
}

pub fn class_spec(class: &str, k: u32, growth_arg: Option<&str>) -> Result<ClassSpec, Failure> {
    let kind = ClassKind::parse(class).ok_or_else(|| Failure::Usage(format!("unknown class {class:?}")))?;
    let f = growth_arg.map(growth).transpose()?;
    Ok(ClassSpec::new(kind, k, f)?)
}
