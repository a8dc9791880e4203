//! Plain-text exchange for expression vectors, rankings and eigenvalue lists.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{rank_genes, validate_expression};

#[derive(Debug, Clone, PartialEq)]
pub struct ExpressionRecord {
    pub gene_id: Option<String>,
    pub value: f64,
}

/// Reads either one value per line or a CSV with header `gene_id,ex`.
pub fn read_expression_file(path: impl AsRef<Path>) -> Result<Vec<ExpressionRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let mut text = String::new();
    std::io::Read::read_to_string(&mut reader, &mut text).map_err(|e| Error::io(path, e))?;
    parse_expression(&text)
}

pub fn parse_expression(text: &str) -> Result<Vec<ExpressionRecord>> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty());
    let records = match first {
        Some(line) if line.contains(',') => parse_expression_csv(text)?,
        _ => parse_expression_plain(text)?,
    };
    let values: Vec<f64> = records.iter().map(|r| r.value).collect();
    validate_expression(&values)?;
    Ok(records)
}

fn parse_value(token: &str, line: usize) -> Result<f64> {
    token
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidExpression(format!("line {line}: cannot parse '{}'", token.trim())))
}

fn parse_expression_plain(text: &str) -> Result<Vec<ExpressionRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(k, l)| {
            Ok(ExpressionRecord {
                gene_id: None,
                value: parse_value(l, k + 1)?,
            })
        })
        .collect()
}

fn parse_expression_csv(text: &str) -> Result<Vec<ExpressionRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "gene_id" || &headers[1] != "ex" {
        return Err(Error::InvalidExpression(format!(
            "CSV header must be 'gene_id,ex', found '{}'",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        out.push(ExpressionRecord {
            gene_id: Some(rec[0].to_string()),
            value: parse_value(&rec[1], k + 2)?,
        });
    }
    Ok(out)
}

/// Orders expression records to match the matrix rows.
///
/// When both the records and `gene_ids` carry identifiers, values are placed by
/// identifier and every gene must appear exactly once; otherwise records are
/// taken positionally and must number exactly `n`.
pub fn align_expression(records: &[ExpressionRecord], gene_ids: Option<&[String]>, n: usize) -> Result<Vec<f64>> {
    let keyed = records.iter().all(|r| r.gene_id.is_some());
    match gene_ids {
        Some(ids) if keyed && !records.is_empty() => {
            if ids.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: ids.len() });
            }
            let row: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
            let mut out = vec![f64::NAN; n];
            for r in records {
                let id = r.gene_id.as_deref().unwrap();
                let &i = row
                    .get(id)
                    .ok_or_else(|| Error::InvalidExpression(format!("unknown gene id '{id}'")))?;
                if !out[i].is_nan() {
                    return Err(Error::InvalidExpression(format!("gene id '{id}' listed twice")));
                }
                out[i] = r.value;
            }
            if let Some(i) = out.iter().position(|v| v.is_nan()) {
                return Err(Error::InvalidExpression(format!("no value for gene '{}'", ids[i])));
            }
            Ok(out)
        }
        _ => {
            if records.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: records.len() });
            }
            Ok(records.iter().map(|r| r.value).collect())
        }
    }
}

/// Reads an `index<TAB>gene_id` map as written by [`write_gene_index`].
pub fn read_gene_index(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut ids = Vec::new();
    for (k, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (idx, id) = line
            .split_once('\t')
            .ok_or_else(|| Error::Annotation(format!("line {}: expected index<TAB>gene_id", k + 1)))?;
        let idx: usize = idx
            .trim()
            .parse()
            .map_err(|_| Error::Annotation(format!("line {}: bad index '{idx}'", k + 1)))?;
        if idx != ids.len() + 1 {
            return Err(Error::Annotation(format!(
                "line {}: expected index {}, found {idx}",
                k + 1,
                ids.len() + 1
            )));
        }
        ids.push(id.trim().to_string());
    }
    Ok(ids)
}

/// Writes `index<TAB>gene_id` lines with 1-based matrix row indices.
pub fn write_gene_index(path: impl AsRef<Path>, ids: &[String]) -> Result<()> {
    let path = path.as_ref();
    let write = || -> std::io::Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "# index\tgene_id")?;
        for (i, id) in ids.iter().enumerate() {
            writeln!(w, "{}\t{}", i + 1, id)?;
        }
        w.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

/// Writes `gene_id,score,rank` rows in rank order (rank 1 first).
///
/// Without gene ids, the 1-based row index is used as the identifier.
pub fn write_ranking_csv(path: impl AsRef<Path>, x: &[f64], gene_ids: Option<&[String]>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["gene_id", "score", "rank"])?;
    for (rank, &i) in rank_genes(x).iter().enumerate() {
        let id = match gene_ids {
            Some(ids) => ids[i].clone(),
            None => (i + 1).to_string(),
        };
        w.write_record([id, x[i].to_string(), (rank + 1).to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// One eigenvalue per line.
pub fn write_eigenvalues_csv(path: impl AsRef<Path>, values: &[f64]) -> Result<()> {
    let path = path.as_ref();
    let write = || -> std::io::Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        for v in values {
            writeln!(w, "{v}")?;
        }
        w.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_values() {
        let r = parse_expression("0.5\n\n1.25\n0\n").unwrap();
        assert_eq!(r.iter().map(|r| r.value).collect::<Vec<_>>(), vec![0.5, 1.25, 0.0]);
        assert!(r.iter().all(|r| r.gene_id.is_none()));
    }

    #[test]
    fn negative_value_rejected() {
        assert!(matches!(parse_expression("0.2\n-0.1\n"), Err(Error::InvalidExpression(_))));
        assert!(matches!(
            parse_expression("gene_id,ex\ng1,-0.1\n"),
            Err(Error::InvalidExpression(_))
        ));
    }

    #[test]
    fn csv_by_gene_id() {
        let r = parse_expression("gene_id,ex\ng2,2.0\ng1,1.0\n").unwrap();
        let ids = vec!["g1".to_string(), "g2".to_string()];
        assert_eq!(align_expression(&r, Some(&ids), 2).unwrap(), vec![1.0, 2.0]);
        assert_eq!(align_expression(&r, None, 2).unwrap(), vec![2.0, 1.0]);
        let missing = vec!["g1".to_string(), "g3".to_string()];
        assert!(align_expression(&r, Some(&missing), 2).is_err());
    }

    #[test]
    fn bad_csv_header() {
        assert!(parse_expression("gene,value\ng1,1\n").is_err());
    }

    #[test]
    fn positional_length_checked() {
        let r = parse_expression("1\n2\n").unwrap();
        assert!(matches!(align_expression(&r, None, 3), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn ranking_csv_and_gene_index() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rank.csv");
        write_ranking_csv(&path, &[4.0 / 3.0, 5.0 / 6.0, 5.0 / 6.0], None).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "gene_id,score,rank");
        assert!(lines[1].starts_with("1,1.333"));
        assert!(lines[2].starts_with("2,0.833") && lines[2].ends_with(",2"));
        assert!(lines[3].starts_with("3,") && lines[3].ends_with(",3"));

        let ids: Vec<String> = ["b", "a"].iter().map(|s| s.to_string()).collect();
        let idx = dir.path().join("genes.tsv");
        write_gene_index(&idx, &ids).unwrap();
        assert_eq!(read_gene_index(&idx).unwrap(), ids);
    }
}
