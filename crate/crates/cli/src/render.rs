//! Plain-text rendering of documents.

use std::fmt::Write;

use qgraph_core::C64;

use crate::doc::{Document, Metadata, Rows, SetDoc};

fn num(z: C64) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re:.6}")
    } else if re == 0.0 {
        format!("{im:.6}i")
    } else {
        format!("{re:.6}{im:+.6}i")
    }
}

fn table(out: &mut String, m: &Rows) {
    let cells: Vec<Vec<String>> = m.iter().map(|r| r.iter().copied().map(num).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "  {}", line.join("  "));
    }
}

fn set_line(set: &SetDoc) -> String {
    match (&set.blocks, &set.group) {
        (Some(b), _) => format!("blocks [{}]", b.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")),
        (None, Some(g)) => {
            let o: Vec<String> = g.orders.iter().map(u64::to_string).collect();
            format!("twisted group algebra of Z_{}", o.join(" x Z_"))
        }
        _ => "unspecified".into(),
    }
}

fn metadata(out: &mut String, md: &Metadata) {
    for (k, v) in md {
        let _ = writeln!(out, "  {k}: {v}");
    }
}

pub fn human(doc: &Document) -> String {
    let mut out = String::new();
    match doc {
        Document::QuantumSet { set, metadata: md, .. } => {
            let _ = writeln!(out, "quantum set: {}", set_line(set));
            metadata(&mut out, md);
        }
        Document::QuantumGraph { set, adjacency, weighted, spectrum, metadata: md, .. } => {
            let _ = writeln!(
                out,
                "{} on {} (dimension {})",
                if *weighted { "weighted quantum graph" } else { "quantum graph" },
                set_line(set),
                adjacency.len()
            );
            metadata(&mut out, md);
            let _ = writeln!(out, "adjacency:");
            table(&mut out, adjacency);
            if let Some(s) = spectrum {
                let _ = writeln!(out, "spectrum: {}", s.iter().copied().map(num).collect::<Vec<_>>().join(", "));
            }
        }
        Document::EdgeProjection { set, blocks, metadata: md, .. } => {
            let _ = writeln!(out, "edge projection on {}", set_line(set));
            metadata(&mut out, md);
            for (i, row) in blocks.iter().enumerate() {
                for (j, b) in row.iter().enumerate() {
                    let _ = writeln!(out, "block ({i}, {j}):");
                    table(&mut out, b);
                }
            }
        }
        Document::Map { domain, codomain, matrix, metadata: md, .. } => {
            let _ = writeln!(out, "map from {} to {}", set_line(domain), set_line(codomain));
            metadata(&mut out, md);
            table(&mut out, matrix);
        }
        Document::Bicharacter { group, values, metadata: md, .. } => {
            let _ = writeln!(out, "bicharacter on orders {:?}", group.orders);
            metadata(&mut out, md);
            table(&mut out, values);
        }
        Document::Report { title, passed, checks, graph, metadata: md, .. } => {
            let _ = writeln!(out, "{title}: {}", if *passed { "passed" } else { "FAILED" });
            metadata(&mut out, md);
            let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in checks {
                let _ = writeln!(
                    out,
                    "  {:<width$}  {}  residual {:.3e}  (threshold {:.1e})",
                    c.name,
                    if c.passed { "ok  " } else { "FAIL" },
                    c.residual,
                    c.threshold
                );
            }
            if let Some(g) = graph {
                let _ = write!(out, "{g}");
            }
        }
        Document::Certificate { first_trace, second_trace, residual, threshold, metadata: md, .. } => {
            let _ = writeln!(
                out,
                "certificate: {first_trace} and {second_trace} do not Schur-commute (residual {residual:.3e} > {threshold:.1e})"
            );
            let _ = writeln!(out, "  the graph is not quantum isomorphic to any classical graph");
            metadata(&mut out, md);
        }
    }
    out
}
