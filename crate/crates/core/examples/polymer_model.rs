//! A user-defined polymer model: intervals on a line, compatible when they
//! do not overlap or touch. Implementing `PolymerUniverse` is all the engine
//! needs.

use num_complex::Complex64;

use clusterx::polymer::{
    approximate_z, brute_force_z, enumerate_clusters, weight_decay_check, Admission, PolymerUniverse,
};

/// Intervals `[start, start + len)` inside `0..n`.
struct Intervals {
    n: usize,
    activity: f64,
}

impl PolymerUniverse for Intervals {
    type Polymer = (usize, usize);

    fn polymers(&self, max_size: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for start in 0..self.n {
            for len in 1..=max_size.min(self.n - start) {
                out.push((start, len));
            }
        }
        out.sort();
        out
    }

    fn size(&self, p: &(usize, usize)) -> usize {
        p.1
    }

    fn incompatible(&self, a: &(usize, usize), b: &(usize, usize)) -> bool {
        a.0 <= b.0 + b.1 && b.0 <= a.0 + a.1
    }

    fn weight(&self, p: &(usize, usize)) -> clusterx::Result<Complex64> {
        Ok(Complex64::new(self.activity.powi(p.1 as i32), 0.0))
    }
}

fn main() -> clusterx::Result<()> {
    let u = Intervals { n: 4, activity: 0.01 };
    println!("clusters of size <= 2: {}", enumerate_clusters(&u, 2)?.len());

    let report = weight_decay_check(&u, 0.02, 4)?;
    println!("{}", report.describe());
    let approx = approximate_z(&u, 4, 1e-8, Admission::Checked(&report))?;
    let exact = brute_force_z(&u, 4)?;
    println!(
        "Z = {:.12} (m = {}), exact {exact:.12}",
        approx.value, approx.truncation_order
    );
    Ok(())
}
