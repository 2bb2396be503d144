//! Report emission: per-arm metrics tables (CSV and aligned text), ROC
//! curves (CSV and a standalone SVG), GA selection trails, and the
//! four-arm comparison table. All output is built from deterministic
//! string formatting so identical runs produce identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use wct_core::eval::{ConfusionMatrix, Metrics, RocCurve};

use crate::dataset::format_float;
use crate::error::{write_text, CliResult};
use crate::experiment::ReportBundle;

fn pct(v: f64) -> String {
    format!("{:.2}%", v * 100.0)
}

fn opt_pct(v: Option<f64>) -> String {
    v.map(pct).unwrap_or_else(|| "n/a".into())
}

fn opt_float(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_else(|| "n/a".into())
}

/// `fold,tp,tn,fp,fn,sensitivity,specificity,accuracy` rows plus a pooled
/// summary row.
pub fn metrics_csv(bundle: &ReportBundle) -> String {
    let mut out = String::from("fold,tp,tn,fp,fn,sensitivity,specificity,accuracy\n");
    let row = |out: &mut String, name: &str, cm: &ConfusionMatrix, m: &Metrics| {
        let _ = writeln!(
            out,
            "{name},{},{},{},{},{},{},{}",
            cm.true_pos,
            cm.true_neg,
            cm.false_pos,
            cm.false_neg,
            opt_float(m.sensitivity),
            opt_float(m.specificity),
            format_float(m.accuracy),
        );
    };
    for (fold, (cm, m)) in bundle
        .outcome
        .fold_matrices
        .iter()
        .zip(&bundle.outcome.fold_metrics)
        .enumerate()
    {
        row(&mut out, &fold.to_string(), cm, m);
    }
    let pooled_metrics =
        wct_core::eval::metrics(&bundle.outcome.pooled).expect("pooled matrix is non-empty");
    row(&mut out, "pooled", &bundle.outcome.pooled, &pooled_metrics);
    out
}

/// `threshold,fpr,tpr` sweep rows.
pub fn roc_csv(roc: &RocCurve) -> String {
    let mut out = String::from("threshold,fpr,tpr\n");
    for p in &roc.points {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_float(p.threshold),
            format_float(p.fpr),
            format_float(p.tpr)
        );
    }
    out
}

/// Standalone SVG of the ROC curve with the chance diagonal and AUC label.
pub fn roc_svg(roc: &RocCurve, title: &str) -> String {
    let size = 440.0;
    let margin = 50.0;
    let span = size - 2.0 * margin;
    let x = |fpr: f64| margin + fpr * span;
    let y = |tpr: f64| size - margin - tpr * span;
    let mut path = String::new();
    for (i, p) in roc.points.iter().enumerate() {
        let _ = write!(
            path,
            "{}{:.2},{:.2}",
            if i == 0 { "M" } else { " L" },
            x(p.fpr),
            y(p.tpr)
        );
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r#"<rect width="{size}" height="{size}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r##"<line x1="{m}" y1="{b}" x2="{e}" y2="{m}" stroke="#bbbbbb" stroke-dasharray="6,4"/>"##,
        m = margin,
        b = size - margin,
        e = size - margin,
    );
    let _ = writeln!(
        out,
        r#"<rect x="{m}" y="{m}" width="{span}" height="{span}" fill="none" stroke="black"/>"#,
        m = margin,
    );
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{t:.2}</text>"#,
            x(t),
            size - margin + 16.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{t:.2}</text>"#,
            margin - 6.0,
            y(t) + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">false positive rate</text>"#,
        size / 2.0,
        size - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 14 {mid:.2})">true positive rate</text>"#,
        size / 2.0,
        mid = size / 2.0
    );
    let _ = writeln!(
        out,
        r##"<path d="{path}" fill="none" stroke="#cc3311" stroke-width="1.8"/>"##
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{m}" font-size="13" text-anchor="middle">{title} (AUC {auc:.4})</text>"#,
        size / 2.0,
        m = margin - 14.0,
        auc = roc.auc
    );
    out.push_str("</svg>\n");
    out
}

/// `fold,generation,bits,J,fitness` trail of every GA evaluation.
pub fn ga_history_csv(bundle: &ReportBundle) -> String {
    let mut out = String::from("fold,generation,bits,J,fitness\n");
    for sel in &bundle.fold_selections {
        for r in &sel.history {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                sel.fold,
                r.generation,
                r.chromosome.to_bitstring(),
                format_float(r.j),
                format_float(r.fitness)
            );
        }
    }
    out
}

/// Per-fold selected subsets plus the modal row. Indices are 1-based in
/// reports.
pub fn selection_csv(bundle: &ReportBundle) -> String {
    let mut out = String::from("fold,bits,indices,features\n");
    for sel in &bundle.fold_selections {
        let indices: Vec<String> = sel.indices.iter().map(|i| (i + 1).to_string()).collect();
        let names: Vec<String> = sel
            .indices
            .iter()
            .map(|&i| bundle.feature_names[i].clone())
            .collect();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            sel.fold,
            sel.bits,
            indices.join(";"),
            names.join(";")
        );
    }
    let modal_idx: Vec<String> = bundle
        .modal_subset
        .iter()
        .map(|i| (i + 1).to_string())
        .collect();
    let _ = writeln!(
        out,
        "modal,,{},{}",
        modal_idx.join(";"),
        bundle.modal_names.join(";")
    );
    out
}

/// Aligned-text report: contingency table, headline rates, per-fold table,
/// selected features, config echo.
pub fn text_report(bundle: &ReportBundle) -> String {
    let cm = &bundle.outcome.pooled;
    let m = wct_core::eval::metrics(cm).expect("pooled matrix is non-empty");
    let (pos, neg) = {
        let pos = bundle.labels.iter().filter(|&&l| l == 1).count();
        (pos, bundle.labels.len() - pos)
    };
    let mut out = String::new();
    let _ = writeln!(out, "technique: {}", bundle.arm);
    let _ = writeln!(out, "cases: {} ({pos} abnormal / {neg} normal)", bundle.labels.len());
    out.push('\n');
    let _ = writeln!(
        out,
        "contingency (pooled over {} folds)",
        bundle.outcome.fold_matrices.len()
    );
    let _ = writeln!(out, "{:<10}{:>10}{:>10}", "actual", "normal", "abnormal");
    let _ = writeln!(out, "{:<10}{:>10}{:>10}", "normal", cm.true_neg, cm.false_pos);
    let _ = writeln!(out, "{:<10}{:>10}{:>10}", "abnormal", cm.false_neg, cm.true_pos);
    out.push('\n');
    let _ = writeln!(out, "{:<20}{}", "sensitivity", opt_pct(m.sensitivity));
    let _ = writeln!(out, "{:<20}{}", "specificity", opt_pct(m.specificity));
    let _ = writeln!(
        out,
        "{:<20}{}  ({}/{})",
        "accuracy",
        pct(m.accuracy),
        cm.correct(),
        cm.total()
    );
    let _ = writeln!(
        out,
        "{:<20}{}",
        "mean fold accuracy",
        pct(bundle.outcome.mean_fold_accuracy)
    );
    let _ = writeln!(out, "{:<20}{:.4}", "AUC", bundle.roc.auc);
    out.push('\n');
    let _ = writeln!(out, "per-fold");
    let _ = writeln!(
        out,
        "{:>4}  {:>3} {:>3} {:>3} {:>3}  {:>8} {:>8} {:>8}",
        "fold", "tp", "tn", "fp", "fn", "sens", "spec", "acc"
    );
    for (fold, (cm, m)) in bundle
        .outcome
        .fold_matrices
        .iter()
        .zip(&bundle.outcome.fold_metrics)
        .enumerate()
    {
        let _ = writeln!(
            out,
            "{fold:>4}  {:>3} {:>3} {:>3} {:>3}  {:>8} {:>8} {:>8}",
            cm.true_pos,
            cm.true_neg,
            cm.false_pos,
            cm.false_neg,
            opt_pct(m.sensitivity),
            opt_pct(m.specificity),
            pct(m.accuracy)
        );
    }
    out.push('\n');
    let _ = writeln!(
        out,
        "selected features (modal across folds): {}",
        if bundle.modal_names.is_empty() {
            "none".to_string()
        } else {
            bundle.modal_names.join(", ")
        }
    );
    for sel in &bundle.fold_selections {
        let _ = writeln!(
            out,
            "  fold {:>2}: {}  [{}]",
            sel.fold,
            sel.bits,
            sel.indices
                .iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
    }
    out.push('\n');
    let _ = writeln!(out, "config");
    for line in bundle.config_echo.lines() {
        let _ = writeln!(out, "  {line}");
    }
    out
}

/// Comparison CSV across arms.
pub fn comparison_csv(bundles: &[ReportBundle]) -> String {
    let mut out = String::from(
        "technique,pooled_accuracy,mean_fold_accuracy,sensitivity,specificity,auc,selected_features\n",
    );
    for b in bundles {
        let m = wct_core::eval::metrics(&b.outcome.pooled).expect("pooled matrix is non-empty");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            b.arm,
            format_float(b.outcome.pooled_accuracy),
            format_float(b.outcome.mean_fold_accuracy),
            opt_float(m.sensitivity),
            opt_float(m.specificity),
            format_float(b.roc.auc),
            b.modal_names.join(";")
        );
    }
    out
}

/// Aligned comparison table.
pub fn comparison_text(bundles: &[ReportBundle]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<4}{:<22}{:>12}{:>8}",
        "no", "technique", "accuracy", "AUC"
    );
    for (k, b) in bundles.iter().enumerate() {
        let _ = writeln!(
            out,
            "{:<4}{:<22}{:>12}{:>8.4}",
            k + 1,
            b.arm,
            pct(b.outcome.pooled_accuracy),
            b.roc.auc
        );
    }
    out
}

/// Write the full per-arm bundle into `dir`.
pub fn write_bundle(dir: &Path, bundle: &ReportBundle) -> CliResult<()> {
    write_text(&dir.join("report.txt"), &text_report(bundle))?;
    write_text(&dir.join("metrics.csv"), &metrics_csv(bundle))?;
    write_text(&dir.join("roc.csv"), &roc_csv(&bundle.roc))?;
    write_text(&dir.join("roc.svg"), &roc_svg(&bundle.roc, &bundle.arm))?;
    write_text(&dir.join("selection.csv"), &selection_csv(bundle))?;
    if bundle.fold_selections.iter().any(|s| !s.history.is_empty()) {
        write_text(&dir.join("ga_history.csv"), &ga_history_csv(bundle))?;
    }
    Ok(())
}
