//! Evaluation report assembly: per-document ROUGE rows plus corpus means,
//! serialized as JSON and CSV.

use std::collections::BTreeMap;

use dlgsum_core::rouge::{rouge_l, rouge_l_union, rouge_n, Prf};

pub struct Report {
    /// (doc_id, r1, r2, rl) rows in id order.
    pub per_doc: Vec<(String, Prf, Prf, Prf)>,
    /// Corpus-mean F1 per metric (R1, R2, RL).
    pub mean: (f64, f64, f64),
}

/// Score every system output against its references, taking the best F1
/// reference per metric.
pub fn build_report(
    pairs: &BTreeMap<&String, (&Vec<String>, &Vec<String>)>,
    union_lcs: bool,
) -> Result<Report, String> {
    if pairs.is_empty() {
        return Err("nothing to evaluate".to_string());
    }
    let rl_fn = if union_lcs { rouge_l_union } else { rouge_l };
    let mut per_doc = Vec::new();
    for (id, (sys_list, refs)) in pairs {
        // A repeated system id would be ambiguous; take the first output.
        let sys = sys_list
            .first()
            .ok_or_else(|| format!("{id}: empty system record"))?;
        let mut best_r1: Prf = (0.0, 0.0, 0.0);
        let mut best_r2: Prf = (0.0, 0.0, 0.0);
        let mut best_rl: Prf = (0.0, 0.0, 0.0);
        for r in refs.iter() {
            let r1 = rouge_n(sys, r, 1);
            let r2 = rouge_n(sys, r, 2);
            let rl = rl_fn(sys, r);
            if r1.2 > best_r1.2 {
                best_r1 = r1;
            }
            if r2.2 > best_r2.2 {
                best_r2 = r2;
            }
            if rl.2 > best_rl.2 {
                best_rl = rl;
            }
        }
        per_doc.push(((*id).clone(), best_r1, best_r2, best_rl));
    }
    let n = per_doc.len() as f64;
    let mean = (
        per_doc.iter().map(|r| r.1 .2).sum::<f64>() / n,
        per_doc.iter().map(|r| r.2 .2).sum::<f64>() / n,
        per_doc.iter().map(|r| r.3 .2).sum::<f64>() / n,
    );
    Ok(Report { per_doc, mean })
}

impl Report {
    pub fn to_json(&self) -> String {
        let docs: Vec<serde_json::Value> = self
            .per_doc
            .iter()
            .map(|(id, r1, r2, rl)| {
                serde_json::json!({
                    "id": id,
                    "rouge1": {"p": r1.0, "r": r1.1, "f1": r1.2},
                    "rouge2": {"p": r2.0, "r": r2.1, "f1": r2.2},
                    "rougeL": {"p": rl.0, "r": rl.1, "f1": rl.2},
                })
            })
            .collect();
        let root = serde_json::json!({
            "documents": docs,
            "mean": {"rouge1_f1": self.mean.0, "rouge2_f1": self.mean.1,
                     "rougeL_f1": self.mean.2},
        });
        serde_json::to_string_pretty(&root).expect("serializable report") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "id,rouge1_p,rouge1_r,rouge1_f1,rouge2_p,rouge2_r,rouge2_f1,\
             rougeL_p,rougeL_r,rougeL_f1\n",
        );
        for (id, r1, r2, rl) in &self.per_doc {
            let quoted = if id.contains(',') || id.contains('"') {
                format!("\"{}\"", id.replace('"', "\"\""))
            } else {
                id.clone()
            };
            out.push_str(&format!(
                "{quoted},{},{},{},{},{},{},{},{},{}\n",
                r1.0, r1.1, r1.2, r2.0, r2.1, r2.2, rl.0, rl.1, rl.2
            ));
        }
        out.push_str(&format!(
            "MEAN,,,{},,,{},,,{}\n",
            self.mean.0, self.mean.1, self.mean.2
        ));
        out
    }
}
