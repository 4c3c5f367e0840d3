use std::fmt::Write as _;
use std::io::Write;

use super::matrix::{MatrixReport, Record};
use crate::error::Result;

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.3}"))
}

impl MatrixReport {
    /// One CSV row per record; undefined metrics are empty fields.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "config",
            "mode",
            "train",
            "test",
            "combo",
            "classifier",
            "auroc",
            "recall_anxious",
            "recall_non_anxious",
            "selected",
            "best_in_column",
        ])?;
        let num = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        for r in &self.records {
            w.write_record([
                r.config.clone(),
                serde_json::to_value(r.mode)?.as_str().unwrap_or_default().to_string(),
                r.train.clone(),
                r.test.clone(),
                r.combo.to_string(),
                r.classifier.to_string(),
                num(r.auroc),
                num(r.recall_anxious),
                num(r.recall_non_anxious),
                r.selected.to_string(),
                r.best_in_column.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn selected_in(&self, config: &str, combo: crate::features::FeatureCombo) -> Option<&Record> {
        self.records
            .iter()
            .find(|r| r.config == config && r.combo == combo && r.selected)
    }

    /// Combination rows by config columns. Each cell shows the selected
    /// classifier and its (AUROC, anxious recall, non-anxious recall); "-"
    /// marks a cell with no admissible classifier and "*" the best cell of
    /// each column.
    pub fn to_table(&self) -> String {
        let mut cols: Vec<Vec<String>> = Vec::new();
        let mut head = vec!["combo".to_string()];
        head.extend(self.configs.iter().cloned());
        cols.push(head);
        for &combo in &self.combos {
            let mut row = vec![combo.to_string()];
            for cfg in &self.configs {
                row.push(match self.selected_in(cfg, combo) {
                    None => "-".to_string(),
                    Some(r) => format!(
                        "{}{} ({}, {}, {})",
                        if r.best_in_column { "*" } else { "" },
                        r.classifier,
                        cell(r.auroc),
                        cell(r.recall_anxious),
                        cell(r.recall_non_anxious)
                    ),
                });
            }
            cols.push(row);
        }
        let width: Vec<usize> = (0..cols[0].len())
            .map(|j| cols.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
            .collect();
        let mut s = String::new();
        for row in &cols {
            let line: Vec<String> = row.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(s, "{}", line.join("  ").trim_end());
        }
        let _ = writeln!(s, "models trained: {}", self.model_count);
        s
    }
}
