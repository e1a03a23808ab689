//! `key=value` parameters for the `reduce` and `verify` commands.

use std::collections::BTreeMap;

use xcsp::reduce::ReductionRule;
use xcsp::textio::parse_family_spec;

pub const RULE_NAMES: [&str; 10] = [
    "nae",
    "clique-gj",
    "clique-pad",
    "clique-1j",
    "odd-cycle",
    "even-cycle",
    "even-cycle-csp",
    "girth",
    "c4star-gadget",
    "c4star-macros",
];

/// Splits arguments into `key=value` parameters and the remaining
/// positional arguments.
pub fn split_params(args: &[String]) -> Result<(BTreeMap<String, String>, Vec<String>), String> {
    let mut params = BTreeMap::new();
    let mut rest = Vec::new();
    for a in args {
        match a.split_once('=') {
            Some((k, v)) if !k.is_empty() && !k.contains('/') => {
                if params.insert(k.to_string(), v.to_string()).is_some() {
                    return Err(format!("parameter `{k}` given twice"));
                }
            }
            _ => rest.push(a.clone()),
        }
    }
    Ok((params, rest))
}

/// Removes and parses a numeric parameter.
pub fn take_number(params: &mut BTreeMap<String, String>, key: &str) -> Result<Option<u64>, String> {
    params
        .remove(key)
        .map(|v| v.parse().map_err(|_| format!("parameter `{key}` expects a number, got `{v}`")))
        .transpose()
}

fn required(params: &mut BTreeMap<String, String>, rule: &str, key: &str) -> Result<usize, String> {
    take_number(params, key)?
        .map(|v| v as usize)
        .ok_or_else(|| format!("rule `{rule}` needs `{key}=<number>`"))
}

/// Builds a rule from its name, consuming the parameters it uses.
pub fn parse_rule(name: &str, params: &mut BTreeMap<String, String>) -> Result<ReductionRule, String> {
    let mut num = |key: &str| required(params, name, key);
    let rule = match name {
        "nae" => ReductionRule::NaeSingleQuantifier { n: num("n")?, j: num("j")? },
        "clique-gj" => ReductionRule::CliqueGadgetGj { j: num("j")? },
        "clique-pad" => ReductionRule::CliquePadding { j: num("j")?, n: num("n")? },
        "clique-1j" => ReductionRule::CliqueOneJ { n: num("n")?, j: num("j")? },
        "odd-cycle" => ReductionRule::OddCyclePath { n: num("n")?, j: num("j")? },
        "even-cycle" => ReductionRule::EvenCycleGadget { n: num("n")?, j: num("j")? },
        "even-cycle-csp" => ReductionRule::EvenCycleCspVariant { n: num("n")? },
        "girth" => {
            let spec = params
                .remove("family")
                .ok_or("rule `girth` needs `family=<template family>`")?;
            let family = parse_family_spec(&spec).map_err(|e| e.to_string())?;
            ReductionRule::GirthIsolation { family }
        }
        "c4star-gadget" => ReductionRule::ReflexiveC4Gadget,
        "c4star-macros" => ReductionRule::ReflexiveC4Macros,
        _ => {
            return Err(format!(
                "unknown rule `{name}`; expected one of {}",
                RULE_NAMES.join(", ")
            ))
        }
    };
    rule.check_parameters().map_err(|e| e.to_string())?;
    Ok(rule)
}

/// Fails on parameters nobody consumed.
pub fn no_leftovers(params: &BTreeMap<String, String>) -> Result<(), String> {
    match params.keys().next() {
        Some(k) => Err(format!("unknown parameter `{k}`")),
        None => Ok(()),
    }
}
