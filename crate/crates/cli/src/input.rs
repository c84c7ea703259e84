use std::path::Path;

use prunekit_core::instances::{
    load_costs_csv, load_coverage_list, load_edge_list, load_penalty_csv, load_similarity_csv,
};
use prunekit_core::objectives::{Coverage, FacilityLocation, Proxy, RestrictedFacilityLocation};
use prunekit_core::instances::GenSpec;
use prunekit_core::ObjectiveSpec;

use crate::args::{InstanceArgs, ObjectiveArg};
use crate::Failure;

fn need<'a>(value: &'a Option<std::path::PathBuf>, flag: &str, objective: &str) -> Result<&'a Path, Failure> {
    value
        .as_deref()
        .ok_or_else(|| Failure::config(format!("--objective {objective} needs {flag}")))
}

/// What an `--instance` file holds.
pub enum Source {
    Objective(ObjectiveSpec),
    Generator(GenSpec),
}

/// Reads a JSON instance: a bare tagged objective, a `gen` document carrying
/// one under `objective`, or a generator spec.
pub fn read_source(path: &Path) -> Result<Source, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    let mut doc: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    if let Some(inner) = doc.get_mut("objective") {
        doc = inner.take();
    } else if doc.get("family").is_some() {
        let spec: GenSpec = serde_json::from_value(doc)
            .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
        return Ok(Source::Generator(spec));
    }
    let spec: ObjectiveSpec = serde_json::from_value(doc)
        .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    spec.validate()?;
    Ok(Source::Objective(spec))
}

pub fn read_instance(path: &Path) -> Result<ObjectiveSpec, Failure> {
    match read_source(path)? {
        Source::Objective(spec) => Ok(spec),
        Source::Generator(gen) => Ok(gen.build()?),
    }
}

pub fn load_objective(args: &InstanceArgs) -> Result<ObjectiveSpec, Failure> {
    if let Some(path) = &args.instance {
        if args.objective.is_some() {
            return Err(Failure::config("give either --instance or --objective, not both"));
        }
        return read_instance(path);
    }
    let Some(kind) = args.objective else {
        return Err(Failure::config("an objective is required: --instance or --objective"));
    };
    Ok(match kind {
        ObjectiveArg::Cut => {
            let g = load_edge_list(need(&args.graph, "--graph", "cut")?)?;
            ObjectiveSpec::Cut(g.into_cut()?)
        }
        ObjectiveArg::Coverage => {
            let (universe, covers) = load_coverage_list(need(&args.cover, "--cover", "coverage")?)?;
            ObjectiveSpec::Coverage(Coverage::new(universe, covers, None)?)
        }
        ObjectiveArg::FacilityLocation => {
            let sim = load_similarity_csv(need(&args.sim, "--sim", "facility_location")?)?;
            ObjectiveSpec::FacilityLocation(FacilityLocation::new(sim)?)
        }
        ObjectiveArg::Proxy => {
            let sim = load_similarity_csv(need(&args.sim, "--sim", "proxy")?)?;
            let penalty = load_penalty_csv(need(&args.penalty, "--penalty", "proxy")?)?;
            ObjectiveSpec::Proxy(Proxy::new(FacilityLocation::new(sim)?, penalty, args.shift)?)
        }
        ObjectiveArg::RestrictedFl => {
            let sim = load_similarity_csv(need(&args.sim, "--sim", "restricted_fl")?)?;
            let rel_path = need(&args.rel, "--rel", "restricted_fl")?;
            let rows = load_similarity_csv(rel_path)?;
            if rows.iter().any(|r| r.len() != 1) {
                return Err(Failure::parse(format!(
                    "{}: expected one relevance value per line",
                    rel_path.display()
                )));
            }
            let rel = rows.into_iter().map(|r| r[0]).collect();
            ObjectiveSpec::RestrictedFl(RestrictedFacilityLocation::new(sim, rel, args.tau)?)
        }
    })
}

pub fn load_costs(path: &Path) -> Result<Vec<f64>, Failure> {
    Ok(load_costs_csv(path)?)
}

/// `3`, `1,5,9` or the half-open range `0..10`.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>, Failure> {
    let bad = || Failure::config(format!("bad seed list {text:?}"));
    let seeds: Vec<u64> = if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        (a..b).collect()
    } else {
        text.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    if seeds.is_empty() {
        return Err(bad());
    }
    Ok(seeds)
}

pub fn parse_list(text: &str, flag: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Failure::config(format!("bad {flag} list {text:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("3").unwrap(), vec![3]);
        assert_eq!(parse_seeds("1, 5,9").unwrap(), vec![1, 5, 9]);
        assert_eq!(parse_seeds("2..5").unwrap(), vec![2, 3, 4]);
        assert!(parse_seeds("5..5").is_err());
        assert!(parse_seeds("x").is_err());
    }
}
