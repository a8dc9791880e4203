use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use serde::Serialize;

use generank_core::io::write_gene_index;
use generank_core::{
    build_adjacency_from_annotations, generate_renga, random_annotations, write_matrix_market, AnnotationTable,
    RengaParams,
};

use crate::provenance::{create_dir, write_json, Provenance};
use crate::Status;

#[derive(Debug, Subcommand)]
pub enum GenerateCommand {
    /// Range-dependent random network.
    Renga(RengaArgs),
    /// Link every pair of genes sharing an annotation term.
    FromAnnotations(AnnotationArgs),
    /// Random `gene<TAB>term` annotation table.
    RandomAnnotations(RandomAnnotationArgs),
}

#[derive(Debug, Args)]
pub struct RengaArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.9)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Stem of the output files.
    #[arg(long, default_value = "renga")]
    name: String,
}

#[derive(Debug, Args)]
pub struct AnnotationArgs {
    /// `gene_id<TAB>term` pairs, one per line.
    annotations: PathBuf,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, default_value = "network")]
    name: String,
}

#[derive(Debug, Args)]
pub struct RandomAnnotationArgs {
    #[arg(long)]
    genes: usize,
    #[arg(long)]
    terms: usize,
    /// Each gene carries between 0 and this many terms.
    #[arg(long, default_value_t = 3)]
    max_terms: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output TSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct Metadata<'a> {
    provenance: Provenance,
    generator: Generator,
    n: usize,
    nnz: usize,
    matrix: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    gene_index: Option<&'a str>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Generator {
    Renga { params: RengaParams },
    Annotations { path: PathBuf, genes: usize },
}

pub fn run(cmd: GenerateCommand) -> Result<Status> {
    match cmd {
        GenerateCommand::Renga(a) => renga(a),
        GenerateCommand::FromAnnotations(a) => from_annotations(a),
        GenerateCommand::RandomAnnotations(a) => random(a),
    }
}

fn renga(a: RengaArgs) -> Result<Status> {
    let params = RengaParams::new(a.n, a.lambda, a.beta, a.seed)?;
    let w = generate_renga(&params)?;
    create_dir(&a.out_dir)?;
    let mtx = format!("{}.mtx", a.name);
    write_matrix_market(&w, a.out_dir.join(&mtx))?;
    let meta = Metadata {
        provenance: Provenance::new("generate renga"),
        generator: Generator::Renga { params },
        n: w.n(),
        nnz: w.nnz(),
        matrix: &mtx,
        gene_index: None,
    };
    write_json(&a.out_dir.join(format!("{}.meta.json", a.name)), &meta)?;
    println!("wrote {} ({} nodes, {} stored entries)", a.out_dir.join(&mtx).display(), w.n(), w.nnz());
    Ok(Status::Success)
}

fn from_annotations(a: AnnotationArgs) -> Result<Status> {
    let table = AnnotationTable::read_tsv(&a.annotations)
        .with_context(|| format!("reading {}", a.annotations.display()))?;
    let (w, ids) = build_adjacency_from_annotations(&table)?;
    create_dir(&a.out_dir)?;
    let mtx = format!("{}.mtx", a.name);
    let genes = format!("{}.genes.tsv", a.name);
    write_matrix_market(&w, a.out_dir.join(&mtx))?;
    write_gene_index(a.out_dir.join(&genes), &ids)?;
    let meta = Metadata {
        provenance: Provenance::new("generate from-annotations"),
        generator: Generator::Annotations { path: a.annotations.clone(), genes: ids.len() },
        n: w.n(),
        nnz: w.nnz(),
        matrix: &mtx,
        gene_index: Some(&genes),
    };
    write_json(&a.out_dir.join(format!("{}.meta.json", a.name)), &meta)?;
    println!("wrote {} ({} genes, {} stored entries)", a.out_dir.join(&mtx).display(), w.n(), w.nnz());
    Ok(Status::Success)
}

fn random(a: RandomAnnotationArgs) -> Result<Status> {
    let table = random_annotations(a.genes, a.terms, a.max_terms, a.seed)?;
    let text = table.to_tsv();
    std::fs::write(&a.out, text).with_context(|| format!("writing {}", a.out.display()))?;
    println!("wrote {} ({} genes)", a.out.display(), table.len());
    Ok(Status::Success)
}
