//! Pairwise causality networks around a focal variable, with CSV, JSON and
//! Graphviz DOT export.
//!
//! Every test is bivariate-conditional: the conditioning set is always the
//! full remaining panel. Per-pair failures are recorded on the edge and the
//! run continues, so a K-variable panel always yields exactly K-1 edges per
//! direction.

use crate::error::{Error, Result};
use crate::panel::Panel;
use crate::par::maybe_par_map;
use crate::pds::{pds_la_test, PdsConfig, TestVariant};
use serde::{Deserialize, Serialize};

/// One directed test outcome.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NetworkEdge {
    pub from: String,
    pub to: String,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    /// Number of selected control columns (union size) behind the test.
    pub selected_count: Option<usize>,
    pub error: Option<String>,
}

fn run_pair(
    panel: &Panel,
    caused: usize,
    causing: usize,
    cfg: &PdsConfig,
    variant: TestVariant,
) -> NetworkEdge {
    let from = panel.names()[causing].clone();
    let to = panel.names()[caused].clone();
    match pds_la_test(panel, caused, causing, cfg, variant) {
        Ok(res) => NetworkEdge {
            from,
            to,
            statistic: Some(res.statistic),
            p_value: Some(res.p_value),
            selected_count: Some(res.selected.union_size()),
            error: None,
        },
        Err(e) => NetworkEdge {
            from,
            to,
            statistic: None,
            p_value: None,
            selected_count: None,
            error: Some(e.to_string()),
        },
    }
}

fn sort_edges(edges: &mut [NetworkEdge]) {
    edges.sort_by(|a, b| match (a.p_value, b.p_value) {
        (Some(x), Some(y)) => x
            .partial_cmp(&y)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| (a.from.clone(), a.to.clone()).cmp(&(b.from.clone(), b.to.clone()))),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => (a.from.clone(), a.to.clone()).cmp(&(b.from.clone(), b.to.clone())),
    });
}

/// Tests every other variable as a cause of `target`: edges `v -> target`.
pub fn network_to(
    panel: &Panel,
    target: &str,
    cfg: &PdsConfig,
    variant: TestVariant,
    parallel: bool,
) -> Result<Vec<NetworkEdge>> {
    let caused = panel.var_index(target)?;
    let pairs: Vec<usize> = (0..panel.k_vars()).filter(|&j| j != caused).collect();
    let mut edges = maybe_par_map(pairs, parallel, |causing| {
        run_pair(panel, caused, causing, cfg, variant)
    });
    sort_edges(&mut edges);
    Ok(edges)
}

/// Tests `source` as a cause of every other variable: edges `source -> v`.
pub fn network_from(
    panel: &Panel,
    source: &str,
    cfg: &PdsConfig,
    variant: TestVariant,
    parallel: bool,
) -> Result<Vec<NetworkEdge>> {
    let causing = panel.var_index(source)?;
    let pairs: Vec<usize> = (0..panel.k_vars()).filter(|&j| j != causing).collect();
    let mut edges = maybe_par_map(pairs, parallel, |caused| {
        run_pair(panel, caused, causing, cfg, variant)
    });
    sort_edges(&mut edges);
    Ok(edges)
}

/// Both directions around one node.
pub fn network_both(
    panel: &Panel,
    node: &str,
    cfg: &PdsConfig,
    variant: TestVariant,
    parallel: bool,
) -> Result<Vec<NetworkEdge>> {
    let mut edges = network_to(panel, node, cfg, variant, parallel)?;
    edges.extend(network_from(panel, node, cfg, variant, parallel)?);
    Ok(edges)
}

/// Holm step-down adjustment over the testable edges: the i-th smallest
/// p-value is scaled by `(m - i)` and monotonized, capped at one. Error
/// edges pass through unchanged. Off by default everywhere; raw per-edge
/// p-values are the primary output.
pub fn holm_adjust(edges: &[NetworkEdge]) -> Vec<NetworkEdge> {
    let mut indexed: Vec<(usize, f64)> = edges
        .iter()
        .enumerate()
        .filter_map(|(i, e)| e.p_value.map(|p| (i, p)))
        .collect();
    indexed.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let m = indexed.len();
    let mut out = edges.to_vec();
    let mut running_max = 0.0f64;
    for (rank, (idx, p)) in indexed.into_iter().enumerate() {
        let adjusted = ((m - rank) as f64 * p).min(1.0).max(running_max);
        running_max = adjusted;
        out[idx].p_value = Some(adjusted);
    }
    let mut out_sorted = out;
    sort_edges(&mut out_sorted);
    out_sorted
}

/// CSV with full diagnostics, one row per edge.
pub fn edges_to_csv(edges: &[NetworkEdge]) -> String {
    let mut out = String::from("from,to,statistic,p_value,selected_count,error\n");
    for e in edges {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            e.from,
            e.to,
            e.statistic.map_or(String::new(), |v| format!("{v}")),
            e.p_value.map_or(String::new(), |v| format!("{v}")),
            e.selected_count.map_or(String::new(), |v| v.to_string()),
            e.error
                .clone()
                .map_or(String::new(), |m| format!("\"{}\"", m.replace('"', "'"))),
        ));
    }
    out
}

/// JSON array of edges with full diagnostics.
pub fn edges_to_json(edges: &[NetworkEdge]) -> Result<String> {
    serde_json::to_string_pretty(edges)
        .map_err(|e| Error::InvalidConfig(format!("JSON serialization failed: {e}")))
}

pub fn edges_from_json(text: &str) -> Result<Vec<NetworkEdge>> {
    serde_json::from_str(text).map_err(|e| Error::ParseError {
        line: 0,
        msg: format!("bad edge JSON: {e}"),
    })
}

/// Graphviz digraph with one edge statement per test significant at
/// `alpha_filter`; error edges never appear.
pub fn edges_to_dot(edges: &[NetworkEdge], alpha_filter: f64) -> String {
    let mut out = String::from("digraph granger {\n");
    for e in edges {
        if let Some(p) = e.p_value {
            if p <= alpha_filter {
                out.push_str(&format!(
                    "    \"{}\" -> \"{}\" [label=\"p={:.4}\"];\n",
                    escape(&e.from),
                    escape(&e.to),
                    p
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

fn escape(name: &str) -> String {
    name.replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lag::LagConfig;
    use crate::pds::ExtraLagPolicy;
    use crate::simulate::{simulate_levels, DgpKind, DgpSpec};

    fn small_cfg() -> PdsConfig {
        PdsConfig {
            lag: LagConfig {
                p: 1,
                d: 1,
                trim_initial: true,
                intercept: false,
            },
            extra_lag: ExtraLagPolicy::Off,
            ..PdsConfig::default()
        }
    }

    fn test_panel() -> Panel {
        let spec = DgpSpec {
            seed: 17,
            ..DgpSpec::new(DgpKind::Dgp1, 4, 150)
        };
        simulate_levels(&spec).unwrap()
    }

    #[test]
    fn emits_exactly_k_minus_one_edges() {
        let panel = test_panel();
        let edges = network_to(&panel, "z1", &small_cfg(), TestVariant::LmF, false).unwrap();
        assert_eq!(edges.len(), 3);
        assert!(edges.iter().all(|e| e.to == "z1" && e.from != "z1"));
        // Sorted by p-value.
        let ps: Vec<f64> = edges.iter().filter_map(|e| e.p_value).collect();
        assert!(ps.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn both_directions_cover_all_pairs() {
        let panel = test_panel();
        let edges = network_both(&panel, "z2", &small_cfg(), TestVariant::LmF, false).unwrap();
        assert_eq!(edges.len(), 6);
        assert_eq!(edges.iter().filter(|e| e.to == "z2").count(), 3);
        assert_eq!(edges.iter().filter(|e| e.from == "z2").count(), 3);
    }

    #[test]
    fn unknown_node_is_an_error() {
        let panel = test_panel();
        assert!(matches!(
            network_to(&panel, "nope", &small_cfg(), TestVariant::LmF, false),
            Err(Error::UnknownVariable { .. })
        ));
    }

    #[test]
    fn json_roundtrip() {
        let panel = test_panel();
        let edges = network_from(&panel, "z3", &small_cfg(), TestVariant::LmF, false).unwrap();
        let json = edges_to_json(&edges).unwrap();
        let back = edges_from_json(&json).unwrap();
        assert_eq!(edges, back);
    }

    #[test]
    fn dot_filters_by_alpha() {
        let edges = vec![
            NetworkEdge {
                from: "a".into(),
                to: "b".into(),
                statistic: Some(9.0),
                p_value: Some(0.002),
                selected_count: Some(0),
                error: None,
            },
            NetworkEdge {
                from: "b".into(),
                to: "c".into(),
                statistic: Some(0.4),
                p_value: Some(0.6),
                selected_count: Some(0),
                error: None,
            },
            NetworkEdge {
                from: "c".into(),
                to: "a".into(),
                statistic: None,
                p_value: None,
                selected_count: None,
                error: Some("boom".into()),
            },
        ];
        let dot = edges_to_dot(&edges, 0.01);
        assert_eq!(dot.matches("->").count(), 1);
        assert!(dot.contains("\"a\" -> \"b\""));
        let empty = edges_to_dot(&[], 0.05);
        assert_eq!(empty, "digraph granger {\n}\n");
    }

    #[test]
    fn csv_has_header_and_all_edges() {
        let panel = test_panel();
        let edges = network_to(&panel, "z4", &small_cfg(), TestVariant::LmF, false).unwrap();
        let csv = edges_to_csv(&edges);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("from,to,"));
    }

    #[test]
    fn parallel_and_serial_edges_agree() {
        let panel = test_panel();
        let a = network_both(&panel, "z1", &small_cfg(), TestVariant::LmF, true).unwrap();
        let b = network_both(&panel, "z1", &small_cfg(), TestVariant::LmF, false).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn holm_adjustment_is_monotone_and_conservative() {
        let mk = |from: &str, p: f64| NetworkEdge {
            from: from.into(),
            to: "t".into(),
            statistic: Some(1.0),
            p_value: Some(p),
            selected_count: Some(0),
            error: None,
        };
        let edges = vec![mk("a", 0.01), mk("b", 0.04), mk("c", 0.03)];
        let adj = holm_adjust(&edges);
        let ps: Vec<f64> = adj.iter().map(|e| e.p_value.unwrap()).collect();
        // Sorted ascending, each at least the raw value, first is 3 * 0.01.
        assert!(ps.windows(2).all(|w| w[0] <= w[1]));
        assert!((ps[0] - 0.03).abs() < 1e-12);
        assert!(ps.iter().all(|&p| p <= 1.0));
    }
}
