//! Writes the bundled synthetic corpus: 241 papers by seven authors (seven
//! of them coauthored, 248 memberships) scored against 30 reference sets.
//!
//! cargo run -p percentile-impact --example synthetic_corpus -- fixtures/synthetic

use std::fs::File;
use std::path::PathBuf;

use percentile_impact::io::{write_papers, write_reference_distributions};
use percentile_impact::{PaperRecord, ReferenceDistribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2011;
const MEMBERSHIPS: [usize; 7] = [23, 37, 22, 32, 37, 65, 32];
/// Citation draws per paper; the best (positive) or worst (negative) of
/// that many picks from the reference set is kept.
const STRENGTH: [i32; 7] = [3, 3, 3, 2, 1, 1, -2];

fn main() -> percentile_impact::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures/synthetic".into()));
    std::fs::create_dir_all(&dir).expect("output directory");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let mut refs = Vec::new();
    for j in 0..30 {
        let size = rng.random_range(12..=400);
        let scale = rng.random_range(2.0..40.0);
        let counts: Vec<u64> = (0..size)
            .map(|_| {
                let u: f64 = rng.random_range(f64::EPSILON..1.0);
                (-u.ln() * scale).floor() as u64
            })
            .collect();
        refs.push(ReferenceDistribution::new(
            format!("J{:02}:{}", j % 10, 1997 + j / 10 * 3),
            counts,
        )?);
    }

    let draw = |rng: &mut ChaCha8Rng, strength: i32| -> (String, u64) {
        let r = &refs[rng.random_range(0..refs.len())];
        let picks = (0..strength.unsigned_abs().max(1)).map(|_| r.counts[rng.random_range(0..r.len())]);
        let c = if strength >= 0 { picks.max() } else { picks.min() };
        (r.reference_key.clone(), c.expect("at least one pick"))
    };

    let mut papers = Vec::new();
    for (s, &strength) in STRENGTH.iter().enumerate() {
        let t = (s + 1) % 7;
        let (key, c) = draw(&mut rng, strength.max(STRENGTH[t]));
        papers.push(PaperRecord::new(
            format!("co{}", s + 1),
            c,
            key,
            vec![format!("PI{}", s + 1), format!("PI{}", t + 1)],
        )?);
    }
    for (s, &n) in MEMBERSHIPS.iter().enumerate() {
        for i in 0..n - 2 {
            let (key, c) = draw(&mut rng, STRENGTH[s]);
            papers.push(PaperRecord::new(
                format!("p{}-{:02}", s + 1, i + 1),
                c,
                key,
                vec![format!("PI{}", s + 1)],
            )?);
        }
    }

    write_papers(File::create(dir.join("papers.csv")).expect("papers.csv"), &papers, None)?;
    write_reference_distributions(File::create(dir.join("refs.csv")).expect("refs.csv"), &refs)?;
    eprintln!("{} papers, {} reference sets", papers.len(), refs.len());
    Ok(())
}
