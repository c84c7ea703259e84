use prunekit_core::harness::{
    containment_report_with, separation_study, separation_trials, summarize, sweep as run_sweep,
    ExtractRule, InstanceSource, Reference, ReferenceMode, SeparationConfig, SweepConfig,
};
use prunekit_core::instances::{format_edge_list, gen_gnm, gen_planted, Family, GenSpec, InterferenceParams};
use prunekit_core::knapsack::{extract_budget, prune_sdg_density, KnapsackInstance};
use prunekit_core::objectives::{
    check_monotone, check_monotone_exhaustive, check_submodular, check_submodular_exhaustive,
    PropertyReport,
};
use prunekit_core::prune::{prune_full, Algorithm};
use prunekit_core::{opt_knapsack, ObjectiveSpec, Oracle, SetFunction};
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::input::{load_costs, load_objective, parse_list, parse_seeds, read_source, Source};
use crate::output::{invented_defaults, Report, SCHEMA_VERSION};
use crate::Failure;

/// Ground sets up to this size are checked exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 12;

fn reference_mode(r: ReferenceArg) -> ReferenceMode {
    match r {
        ReferenceArg::Exact => ReferenceMode::Exact,
        ReferenceArg::Greedy => ReferenceMode::Greedy,
    }
}

fn gen_spec(args: &FamilyArgs, seed: u64) -> Result<GenSpec, Failure> {
    let family = args
        .family
        .ok_or_else(|| Failure::config("--family is required"))?;
    let n = args.n.ok_or_else(|| Failure::config("--n is required"))?;
    let family = match family {
        FamilyArg::Gnm => Family::Gnm {
            n,
            m: args
                .m
                .ok_or_else(|| Failure::config("--family gnm needs --m"))?,
        },
        FamilyArg::Planted => Family::Planted {
            n,
            communities: match args.community_size {
                Some(0) => return Err(Failure::config("--community-size must be >= 1")),
                Some(size) => n.div_ceil(size),
                None => args.communities,
            },
            p_in: args.p_in,
            p_out: args.p_out,
        },
        FamilyArg::Interference => {
            let mut p = InterferenceParams::new(n, args.universe);
            p.pair_prob = args.pair_prob;
            p.validate()?;
            Family::Interference(p)
        }
        FamilyArg::Similarity => Family::Similarity {
            rows: args.rows,
            cols: n,
        },
    };
    Ok(GenSpec { family, seed })
}

pub fn gen(args: &GenArgs) -> Result<(), Failure> {
    let spec = gen_spec(&args.family, args.seed)?;
    let text = match args.format {
        GenFormat::Json => {
            let objective = spec.build()?;
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "gen",
                "config": args,
                "defaults": invented_defaults(),
                "generator": spec,
                "objective": objective,
            });
            let mut t = serde_json::to_string(&doc).expect("document serializes");
            t.push('\n');
            t
        }
        GenFormat::Edges => {
            let g = match &spec.family {
                Family::Gnm { n, m } => gen_gnm(*n, *m, spec.seed)?,
                Family::Planted {
                    n,
                    communities,
                    p_in,
                    p_out,
                } => gen_planted(*n, *communities, *p_in, *p_out, spec.seed)?,
                _ => return Err(Failure::config("--format edges needs a graph family")),
            };
            let mut t = format!(
                "# prunekit gen {}\n",
                serde_json::to_string(&spec).expect("spec serializes")
            );
            t.push_str(&format_edge_list(&g));
            t
        }
    };
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::parse(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn need_k(p: &PruneParamsArgs) -> Result<usize, Failure> {
    p.k.ok_or_else(|| Failure::config("--k is required"))
}

fn run_pruner(
    spec: &ObjectiveSpec,
    p: &PruneParamsArgs,
    seed: u64,
) -> Result<prunekit_core::PrunedSet, Failure> {
    let algo = Algorithm::parse(&p.algo)?;
    let width = match algo {
        Algorithm::SeqDisjoint => p.ell.unwrap_or(p.omega),
        _ => p.omega,
    };
    let oracle = Oracle::new(spec.clone());
    Ok(algo.run(&oracle, need_k(p)?, width, p.epsilon, seed)?)
}

fn knapsack_instance(p: &PruneParamsArgs, n: usize) -> Result<Option<KnapsackInstance>, Failure> {
    let Some(path) = &p.costs else {
        if p.budget.is_some() {
            return Err(Failure::config("--budget needs --costs"));
        }
        return Ok(None);
    };
    let budget = p
        .budget
        .ok_or_else(|| Failure::config("--costs needs --budget"))?;
    let costs = load_costs(path)?;
    if costs.len() != n {
        return Err(Failure::config(format!(
            "{} costs given for a ground set of {n}",
            costs.len()
        )));
    }
    Ok(Some(KnapsackInstance::new(costs, budget)?))
}

pub fn prune(args: &PruneArgs) -> Result<(), Failure> {
    let mut report = Report::new("prune", args);
    let spec = load_objective(&args.instance)?;
    let p = &args.params;
    if let Some(instance) = knapsack_instance(p, spec.ground_size())? {
        let oracle = Oracle::new(spec);
        let pruned = prune_sdg_density(&oracle, &instance, p.ell.unwrap_or(p.omega))?;
        report.push("knapsack_pruned", &pruned);
    } else {
        for seed in parse_seeds(&p.seeds)? {
            let pruned = run_pruner(&spec, p, seed)?;
            report.push("pruned", &pruned);
        }
    }
    report.write(args.common.out.as_deref())
}

#[derive(Serialize)]
struct BudgetRecord<'a> {
    budget: f64,
    reference_value: f64,
    reference_set: &'a [usize],
    value: f64,
    set: Vec<usize>,
    ratio: f64,
    reference_contained: bool,
}

fn eval_knapsack(
    report: &mut Report,
    spec: ObjectiveSpec,
    instance: &KnapsackInstance,
    args: &EvalArgs,
) -> Result<(), Failure> {
    let p = &args.params;
    let n = spec.ground_size();
    let all: Vec<usize> = (0..n).collect();
    let grid = instance.budget_grid(p.budgets_grid);
    let guard = args.common.guard as u128;
    let oracle = Oracle::new(spec);
    let pruned = if args.full {
        None
    } else {
        Some(prune_sdg_density(&oracle, instance, p.ell.unwrap_or(p.omega))?)
    };
    let f = oracle.inner();
    let references: Vec<(Vec<usize>, f64)> = match args.reference {
        ReferenceArg::Exact => {
            let profile = prunekit_core::exact::opt_knapsack_guarded(f, &all, &instance.costs, &grid, guard)?;
            profile.argmax.into_iter().zip(profile.opt_by_budget).collect()
        }
        ReferenceArg::Greedy => grid
            .iter()
            .map(|&b| extract_budget(f, &all, &instance.costs, b))
            .collect::<Result<_, _>>()?,
    };
    let elements = pruned.as_ref().map_or(all.clone(), |x| x.elements.clone());
    if let Some(pruned) = &pruned {
        report.push("knapsack_pruned", pruned);
    }
    for (b, (ref_set, ref_value)) in grid.iter().zip(&references) {
        let (set, value) = if elements.len() == n && args.reference == ReferenceArg::Exact {
            // P = N: the reference itself is available inside
            (ref_set.clone(), *ref_value)
        } else if elements.len() <= prunekit_core::knapsack::EXACT_EXTRACT_LIMIT {
            let prof = opt_knapsack(f, &elements, &instance.costs, &[*b])?;
            (prof.argmax[0].clone(), prof.opt_by_budget[0])
        } else {
            extract_budget(f, &elements, &instance.costs, *b)?
        };
        report.push(
            "budget",
            &BudgetRecord {
                budget: *b,
                reference_value: *ref_value,
                reference_set: ref_set,
                ratio: prunekit_core::harness::ratio(value, *ref_value),
                value,
                set,
                reference_contained: ref_set.iter().all(|e| elements.binary_search(e).is_ok()),
            },
        );
    }
    Ok(())
}

pub fn eval(args: &EvalArgs) -> Result<(), Failure> {
    let mut report = Report::new("eval", args);
    let spec = load_objective(&args.instance)?;
    let p = &args.params;
    if let Some(instance) = knapsack_instance(p, spec.ground_size())? {
        eval_knapsack(&mut report, spec, &instance, args)?;
        return report.write(args.common.out.as_deref());
    }
    let guard = args.common.guard as u128;
    let k = need_k(p)?;
    let reference = Reference::compute(&spec, k, reference_mode(args.reference), guard)?;
    let seeds = if args.full { vec![0] } else { parse_seeds(&p.seeds)? };
    for seed in seeds {
        let pruned = if args.full {
            prune_full(spec.ground_size(), k)
        } else {
            run_pruner(&spec, p, seed)?
        };
        let r = containment_report_with(&spec, &pruned, k, &reference, guard)?;
        report.push(
            "containment",
            &json!({
                "seed": seed,
                "alpha": r.alpha(),
                "min_alpha": r.min_alpha(),
                "report": r,
            }),
        );
    }
    report.write(args.common.out.as_deref())
}

pub fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let mut report = Report::new("sweep", args);
    let instance = if args.family.family.is_some() {
        if args.instance.instance.is_some() || args.instance.objective.is_some() {
            return Err(Failure::config("give either --family or an objective, not both"));
        }
        InstanceSource::Generate(gen_spec(&args.family, args.instance_seed)?)
    } else if let (Some(path), None) = (&args.instance.instance, args.instance.objective) {
        match read_source(path)? {
            Source::Generator(spec) => InstanceSource::Generate(spec),
            Source::Objective(spec) => InstanceSource::Fixed(Box::new(spec)),
        }
    } else {
        InstanceSource::Fixed(Box::new(load_objective(&args.instance)?))
    };
    let algorithms = args
        .algo
        .split(',')
        .map(|a| Algorithm::parse(a.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let config = SweepConfig {
        instance,
        algorithms,
        omegas: parse_list(&args.omega, "--omega")?,
        seeds: parse_seeds(&args.seeds)?,
        k: args.k,
        epsilon: args.epsilon,
        reference: reference_mode(args.reference),
        guard: args.common.guard,
        jobs: args.jobs,
    };
    let result = run_sweep(&config)?;
    for row in &result.rows {
        report.push("row", row);
    }
    for cell in &result.cells {
        report.push("cell", cell);
    }
    if let Some(path) = &args.aggregate {
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": "sweep",
            "config": args,
            "defaults": invented_defaults(),
            "cells": result.cells,
        });
        let text = serde_json::to_string_pretty(&doc).expect("document serializes");
        std::fs::write(path, text + "\n")
            .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    }
    if let Some(path) = &args.csv {
        std::fs::write(path, result.cells_csv())
            .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    }
    report.write(args.common.out.as_deref())
}

#[derive(Serialize)]
struct PropertyRecord<'a> {
    objective: &'a str,
    n: usize,
    mode: &'a str,
    passed: bool,
    #[serde(flatten)]
    report: &'a PropertyReport,
}

pub fn check(args: &CheckArgs) -> Result<(), Failure> {
    let mut report = Report::new("check", args);
    let spec = load_objective(&args.instance)?;
    let n = spec.ground_size();
    let exhaustive = n <= EXHAUSTIVE_LIMIT;
    let (sub, mono) = if exhaustive {
        (check_submodular_exhaustive(&spec)?, check_monotone_exhaustive(&spec)?)
    } else {
        (
            check_submodular(&spec, args.trials, args.seed)?,
            check_monotone(&spec, args.trials, args.seed)?,
        )
    };
    let mode = if exhaustive { "exhaustive" } else { "sampled" };
    for r in [&sub, &mono] {
        report.push(
            "property",
            &PropertyRecord {
                objective: spec.name(),
                n,
                mode,
                passed: r.passed(),
                report: r,
            },
        );
    }
    report.write(args.out.as_deref())
}

pub fn separation(args: &SeparationArgs) -> Result<(), Failure> {
    let mut report = Report::new("separation", args);
    let mut params = InterferenceParams::new(args.n, args.universe);
    params.pair_prob = args.pair_prob;
    params.validate()?;
    let config = SeparationConfig {
        params,
        trials: args.trials,
        k: args.k,
        omega: args.omega,
        seed: args.seed,
        extract: match args.extract {
            ExtractArg::Full => ExtractRule::Full,
            ExtractArg::StopAtZero => ExtractRule::StopAtZero,
            ExtractArg::Exact => ExtractRule::Exact,
        },
        guard: args.common.guard,
    };
    let rates = if args.per_trial {
        let trials = separation_trials(&config)?;
        for t in &trials {
            report.push("trial", t);
        }
        summarize(&trials)
    } else {
        separation_study(&config)?
    };
    report.push("rates", &rates);
    report.write(args.common.out.as_deref())
}
