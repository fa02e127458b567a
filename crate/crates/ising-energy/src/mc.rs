//! Monte Carlo sampling of the critical Ising model.
//!
//! The `+` ensemble lives on the dual vertices with every boundary dual spin
//! frozen to `+1`; it is simulated by Swendsen–Wang updates in which all
//! frozen spins belong to a single ghost component that is never flipped, or
//! by single-flip Metropolis sweeps. The free ensemble lives on the primal
//! vertices with no ghost. All randomness comes from a counter-based ChaCha12
//! generator, so a seed fully determines the sample stream; independent
//! chains use the same seed on distinct streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::lattice::{DiscreteDomain, Point};
use crate::{Result, MEAN_FIELD_ENERGY};

/// Which Ising ensemble to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// `+` boundary on the dual graph.
    Plus,
    /// Free boundary on the primal graph.
    Free,
}

impl std::str::FromStr for Boundary {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "plus" | "+" => Ok(Boundary::Plus),
            "free" => Ok(Boundary::Free),
            other => Err(format!("unknown boundary condition {other:?}")),
        }
    }
}

/// Update kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Cluster,
    SingleFlip,
}

/// Monte Carlo parameters. Seeds fully determine the output.
#[derive(Debug, Clone, Copy)]
pub struct McParams {
    pub beta: f64,
    pub burn_in: usize,
    pub sweeps: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub chains: usize,
}

impl Default for McParams {
    fn default() -> Self {
        McParams {
            beta: crate::beta_critical(),
            burn_in: 1000,
            sweeps: 100_000,
            seed: 1,
            algorithm: Algorithm::Cluster,
            chains: 1,
        }
    }
}

/// Mean with a batch-means standard error.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub batches: usize,
}

impl Estimate {
    /// Batch-means estimate from a stream of measurements.
    pub fn from_series(series: &[f64], batches: usize) -> Estimate {
        assert!(
            batches >= 16,
            "need at least 16 batches for a standard error"
        );
        assert!(
            series.len() >= batches,
            "need at least one measurement per batch ({} < {batches})",
            series.len()
        );
        let n = series.len();
        let per = (n / batches).max(1);
        let used = per * batches;
        let series = &series[n - used..];
        let mean = series.iter().sum::<f64>() / used as f64;
        let mut var = 0.0;
        for b in 0..batches {
            let bm = series[b * per..(b + 1) * per].iter().sum::<f64>() / per as f64;
            var += (bm - mean) * (bm - mean);
        }
        var /= (batches - 1) as f64;
        Estimate {
            mean,
            std_error: (var / batches as f64).sqrt(),
            samples: used,
            batches,
        }
    }

    pub fn compatible_with(&self, value: f64, n_sigma: f64) -> bool {
        (self.mean - value).abs() <= n_sigma * self.std_error
    }
}

/// Spin reference inside a bond: a dynamic spin or the frozen + ghost.
#[derive(Debug, Clone, Copy)]
enum SpinRef {
    Dyn(u32),
    Ghost,
}

/// A sampler for either ensemble: spins on sites, bonds from the domain's
/// edges. For `Plus` the sites are the interior dual vertices (boundary dual
/// spins are the ghost); for `Free` the sites are the primal vertices.
pub struct Sampler {
    sites: Vec<Point>,
    bonds: Vec<(SpinRef, SpinRef)>,
    /// Per-site adjacency: (neighbor site or ghost) for single-flip updates.
    adjacency: Vec<Vec<SpinRef>>,
    spins: Vec<i8>,
    beta: f64,
    p_bond: f64,
    algorithm: Algorithm,
    rng: ChaCha12Rng,
    union_find: Vec<u32>,
    flip_choice: Vec<u8>,
}

impl Sampler {
    pub fn new(domain: &DiscreteDomain, boundary: Boundary, params: &McParams) -> Self {
        Self::with_stream(domain, boundary, params, 0)
    }

    /// A sampler on stream `chain` of the seed's generator.
    pub fn with_stream(
        domain: &DiscreteDomain,
        boundary: Boundary,
        params: &McParams,
        chain: u64,
    ) -> Self {
        let (sites, bonds) = match boundary {
            Boundary::Plus => {
                let sites: Vec<Point> = domain.dual_vertices().iter().copied().collect();
                let index: std::collections::BTreeMap<Point, u32> = sites
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| (p, i as u32))
                    .collect();
                let spin_ref = |p: Point| match index.get(&p) {
                    Some(&i) => SpinRef::Dyn(i),
                    None => SpinRef::Ghost,
                };
                let bonds = domain
                    .edge_midpoints()
                    .iter()
                    .map(|&m| {
                        let (f1, f2) = if m.is_horizontal_midpoint() {
                            (m.offset(0, 1), m.offset(0, -1))
                        } else {
                            (m.offset(1, 0), m.offset(-1, 0))
                        };
                        (spin_ref(f1), spin_ref(f2))
                    })
                    .collect();
                (sites, bonds)
            }
            Boundary::Free => {
                let sites: Vec<Point> = domain.vertices().iter().copied().collect();
                let index: std::collections::BTreeMap<Point, u32> = sites
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| (p, i as u32))
                    .collect();
                let bonds = domain
                    .edge_midpoints()
                    .iter()
                    .map(|&m| {
                        let [x, y] = m.edge_endpoints();
                        (SpinRef::Dyn(index[&x]), SpinRef::Dyn(index[&y]))
                    })
                    .collect();
                (sites, bonds)
            }
        };
        let mut adjacency = vec![Vec::new(); sites.len()];
        for &(u, v) in &bonds as &Vec<(SpinRef, SpinRef)> {
            if let SpinRef::Dyn(i) = u {
                adjacency[i as usize].push(v);
            }
            if let SpinRef::Dyn(i) = v {
                adjacency[i as usize].push(u);
            }
        }
        let mut rng = ChaCha12Rng::seed_from_u64(params.seed);
        rng.set_stream(chain);
        let n = sites.len();
        Sampler {
            sites,
            bonds,
            adjacency,
            spins: vec![1; n],
            beta: params.beta,
            p_bond: 1.0 - (-2.0 * params.beta).exp(),
            algorithm: params.algorithm,
            rng,
            union_find: vec![0; n + 1],
            flip_choice: vec![0; n + 1],
        }
    }

    pub fn sites(&self) -> &[Point] {
        &self.sites
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    fn spin_of(&self, r: SpinRef) -> i8 {
        match r {
            SpinRef::Dyn(i) => self.spins[i as usize],
            SpinRef::Ghost => 1,
        }
    }

    /// One Monte Carlo sweep.
    pub fn step(&mut self) {
        match self.algorithm {
            Algorithm::Cluster => self.swendsen_wang(),
            Algorithm::SingleFlip => self.metropolis_sweep(),
        }
    }

    fn find(&mut self, mut i: u32) -> u32 {
        while self.union_find[i as usize] != i {
            let parent = self.union_find[i as usize];
            self.union_find[i as usize] = self.union_find[parent as usize];
            i = self.union_find[i as usize];
        }
        i
    }

    fn swendsen_wang(&mut self) {
        let n = self.spins.len();
        let ghost = n as u32;
        for i in 0..=n {
            self.union_find[i] = i as u32;
        }
        for bi in 0..self.bonds.len() {
            let (u, v) = self.bonds[bi];
            if self.spin_of(u) != self.spin_of(v) {
                continue;
            }
            if self.rng.gen::<f64>() >= self.p_bond {
                continue;
            }
            let iu = match u {
                SpinRef::Dyn(i) => i,
                SpinRef::Ghost => ghost,
            };
            let iv = match v {
                SpinRef::Dyn(i) => i,
                SpinRef::Ghost => ghost,
            };
            let (ru, rv) = (self.find(iu), self.find(iv));
            if ru != rv {
                // Keep the ghost as its own root so frozen clusters are easy
                // to recognize.
                if rv == ghost {
                    self.union_find[ru as usize] = rv;
                } else {
                    self.union_find[rv as usize] = ru;
                }
            }
        }
        // Decide one flip per non-ghost component, in deterministic site
        // order.
        for i in 0..=n {
            self.flip_choice[i] = 2; // undecided
        }
        let ghost_root = self.find(ghost);
        self.flip_choice[ghost_root as usize] = 0;
        for i in 0..n as u32 {
            let root = self.find(i);
            if self.flip_choice[root as usize] == 2 {
                self.flip_choice[root as usize] = u8::from(self.rng.gen::<bool>());
            }
            if self.flip_choice[root as usize] == 1 {
                self.spins[i as usize] = -self.spins[i as usize];
            }
        }
    }

    fn metropolis_sweep(&mut self) {
        for i in 0..self.spins.len() {
            let mut field = 0i32;
            for &r in &self.adjacency[i] {
                field += i32::from(self.spin_of(r));
            }
            let delta_e = 2.0 * f64::from(self.spins[i]) * f64::from(field);
            if delta_e <= 0.0 || self.rng.gen::<f64>() < (-self.beta * delta_e).exp() {
                self.spins[i] = -self.spins[i];
            }
        }
    }

    /// Product of the two spins across the measurement edge for source `a`:
    /// the dual vertical edge through `a` in the `+` ensemble, the primal
    /// horizontal edge in the free one.
    pub fn energy_pair(&self, a: Point, boundary: Boundary) -> (SpinRef2, SpinRef2) {
        let index: std::collections::BTreeMap<Point, u32> = self
            .sites
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, i as u32))
            .collect();
        let lookup = |p: Point| match index.get(&p) {
            Some(&i) => SpinRef2::Dyn(i),
            None => SpinRef2::Ghost,
        };
        match boundary {
            Boundary::Plus => (lookup(a.offset(0, 1)), lookup(a.offset(0, -1))),
            Boundary::Free => (lookup(a.offset(1, 0)), lookup(a.offset(-1, 0))),
        }
    }
}

/// Public spin reference for measurement pairs.
#[derive(Debug, Clone, Copy)]
pub enum SpinRef2 {
    Dyn(u32),
    Ghost,
}

/// Estimate the average energy density `E[σσ] - √2/2` at the horizontal-edge
/// midpoint `a` for the requested ensemble.
///
/// Chains run on independent RNG streams, in parallel threads when more than
/// one is requested; the merged result depends only on the parameters, not
/// on scheduling.
pub fn estimate_energy(
    domain: &DiscreteDomain,
    a: Point,
    boundary: Boundary,
    params: &McParams,
) -> Result<Estimate> {
    assert!(a.is_horizontal_midpoint() && domain.has_edge(a));
    let chains = params.chains.max(1);
    let run_chain = |chain: u64| -> Vec<f64> {
        let mut sampler = Sampler::with_stream(domain, boundary, params, chain);
        let (n, s) = sampler.energy_pair(a, boundary);
        let read = |sampler: &Sampler, r: SpinRef2| -> f64 {
            match r {
                SpinRef2::Dyn(i) => f64::from(sampler.spins[i as usize]),
                SpinRef2::Ghost => 1.0,
            }
        };
        let mut series = Vec::with_capacity(params.sweeps);
        for _ in 0..params.burn_in {
            sampler.step();
        }
        for _ in 0..params.sweeps {
            sampler.step();
            series.push(read(&sampler, n) * read(&sampler, s));
        }
        series
    };

    let mut all = Vec::with_capacity(params.sweeps * chains);
    if chains == 1 {
        all = run_chain(0);
    } else {
        let results: Vec<Vec<f64>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..chains)
                .map(|c| scope.spawn(move || run_chain(c as u64)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("chain panicked"))
                .collect()
        });
        // Merge in chain order regardless of completion order.
        for series in results {
            all.extend(series);
        }
    }
    let mut est = Estimate::from_series(&all, 32);
    est.mean -= MEAN_FIELD_ENERGY;
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contours;
    use num_complex::Complex64;

    fn unit_cell() -> DiscreteDomain {
        DiscreteDomain::from_vertex_set(
            [(1, 1), (2, 1), (1, 2), (2, 2)].map(|(j, k)| Point::vertex(j, k)),
            1.0,
        )
    }

    fn single_edge() -> DiscreteDomain {
        DiscreteDomain::from_vertex_set([Point::vertex(0, 0), Point::vertex(1, 0)], 1.0)
    }

    #[test]
    fn deterministic_replay() {
        let dom = unit_cell();
        let params = McParams {
            sweeps: 50,
            burn_in: 10,
            ..Default::default()
        };
        let run = |algorithm| {
            let mut s = Sampler::new(
                &dom,
                Boundary::Plus,
                &McParams {
                    algorithm,
                    ..params
                },
            );
            let mut out = Vec::new();
            for _ in 0..60 {
                s.step();
                out.push(s.spins().to_vec());
            }
            out
        };
        assert_eq!(run(Algorithm::Cluster), run(Algorithm::Cluster));
        assert_eq!(run(Algorithm::SingleFlip), run(Algorithm::SingleFlip));
    }

    #[test]
    fn zero_temperature_freezes_plus() {
        let dom = unit_cell();
        let params = McParams {
            beta: 50.0,
            sweeps: 20,
            burn_in: 0,
            ..Default::default()
        };
        let mut s = Sampler::new(&dom, Boundary::Plus, &params);
        for _ in 0..20 {
            s.step();
        }
        assert!(s.spins().iter().all(|&x| x == 1));
    }

    #[test]
    fn unit_cell_plus_matches_two_state_sum() {
        // Single dual spin with four + neighbors: E[σ] = tanh(4β_c).
        let dom = unit_cell();
        let a = Point::new(3, 2);
        let exact = (4.0 * crate::beta_critical()).tanh() - MEAN_FIELD_ENERGY;
        for algorithm in [Algorithm::Cluster, Algorithm::SingleFlip] {
            let params = McParams {
                sweeps: 40_000,
                burn_in: 500,
                seed: 7,
                algorithm,
                ..Default::default()
            };
            let est = estimate_energy(&dom, a, Boundary::Plus, &params).unwrap();
            assert!(
                est.compatible_with(exact, 3.0),
                "{algorithm:?}: {} ± {} vs {exact}",
                est.mean,
                est.std_error
            );
        }
    }

    #[test]
    fn single_edge_free_matches_four_state_sum() {
        // Two free spins, one bond: E[σσ] = tanh β_c = α.
        let dom = single_edge();
        let a = Point::new(1, 0);
        let exact = crate::ALPHA - MEAN_FIELD_ENERGY;
        let params = McParams {
            sweeps: 40_000,
            burn_in: 500,
            seed: 11,
            ..Default::default()
        };
        let est = estimate_energy(&dom, a, Boundary::Free, &params).unwrap();
        assert!(
            est.compatible_with(exact, 3.0),
            "{} ± {}",
            est.mean,
            est.std_error
        );
    }

    #[test]
    fn single_flip_detailed_balance_unit_cell() {
        // Empirical stationary distribution of the 1-spin chain vs Boltzmann.
        let dom = unit_cell();
        let params = McParams {
            algorithm: Algorithm::SingleFlip,
            sweeps: 60_000,
            burn_in: 1000,
            seed: 3,
            ..Default::default()
        };
        let mut s = Sampler::new(&dom, Boundary::Plus, &params);
        for _ in 0..params.burn_in {
            s.step();
        }
        let mut plus_count = 0usize;
        for _ in 0..params.sweeps {
            s.step();
            if s.spins()[0] == 1 {
                plus_count += 1;
            }
        }
        let p_emp = plus_count as f64 / params.sweeps as f64;
        let b = crate::beta_critical();
        let p_exact = (4.0f64 * b).exp() / ((4.0f64 * b).exp() + (-4.0f64 * b).exp());
        // 4 SE with the binomial standard error (an overestimate given
        // correlations is fine for an upper bound on the discrepancy scale).
        let se = (p_exact * (1.0 - p_exact) / params.sweeps as f64).sqrt();
        assert!(
            (p_emp - p_exact).abs() < 8.0 * se,
            "empirical {p_emp} vs exact {p_exact} (se {se})"
        );
    }

    #[test]
    fn low_temperature_contour_histogram() {
        // Disagreement contours of sampled + states follow α^{|ω|} weights:
        // on the unit cell P(4-cycle) = α⁴/(1+α⁴).
        let dom = unit_cell();
        let params = McParams {
            sweeps: 60_000,
            burn_in: 500,
            seed: 5,
            ..Default::default()
        };
        let mut s = Sampler::new(&dom, Boundary::Plus, &params);
        for _ in 0..params.burn_in {
            s.step();
        }
        let mut minus = 0usize;
        for _ in 0..params.sweeps {
            s.step();
            if s.spins()[0] == -1 {
                minus += 1;
            }
        }
        let p_emp = minus as f64 / params.sweeps as f64;
        let p_exact = crate::ALPHA.powi(4) / (1.0 + crate::ALPHA.powi(4));
        let se = (p_exact * (1.0 - p_exact) / params.sweeps as f64).sqrt();
        assert!((p_emp - p_exact).abs() < 4.0 * se, "{p_emp} vs {p_exact}");
    }

    #[test]
    fn low_temperature_contour_histogram_two_spins() {
        // Two interior dual spins (2x3 block): four states mapping to
        // {∅, square, square, outer 6-cycle} with weights {1, α⁴, α⁴, α⁶}.
        let dom = DiscreteDomain::from_vertex_set(
            (0..3).flat_map(|j| (0..2).map(move |k| Point::vertex(j, k))),
            1.0,
        );
        let params = McParams {
            sweeps: 80_000,
            burn_in: 500,
            seed: 6,
            ..Default::default()
        };
        let mut s = Sampler::new(&dom, Boundary::Plus, &params);
        assert_eq!(s.sites().len(), 2);
        for _ in 0..params.burn_in {
            s.step();
        }
        let mut counts = [0usize; 4];
        for _ in 0..params.sweeps {
            s.step();
            let idx = usize::from(s.spins()[0] == -1) | (usize::from(s.spins()[1] == -1) << 1);
            counts[idx] += 1;
        }
        let a4 = crate::ALPHA.powi(4);
        let a6 = crate::ALPHA.powi(6);
        let z = 1.0 + 2.0 * a4 + a6;
        let exact = [1.0 / z, a4 / z, a4 / z, a6 / z];
        for (state, (&n, &p)) in counts.iter().zip(exact.iter()).enumerate() {
            let p_emp = n as f64 / params.sweeps as f64;
            let se = (p * (1.0 - p) / params.sweeps as f64).sqrt();
            assert!(
                (p_emp - p).abs() < 4.0 * se,
                "state {state}: empirical {p_emp} vs exact {p}"
            );
        }
    }

    #[test]
    fn plus_and_free_disagree_in_sign_on_a_square() {
        // 8x8 vertices: the + and free estimates at the central edge have
        // opposite signs (stochastic version of the duality identity).
        let dom = DiscreteDomain::from_vertex_set(
            (0..8).flat_map(|j| (0..8).map(move |k| Point::vertex(j, k))),
            1.0,
        );
        let a = dom
            .nearest_horizontal_midpoint(Complex64::new(3.5, 3.5))
            .unwrap();
        let params = McParams {
            sweeps: 30_000,
            burn_in: 1000,
            seed: 9,
            ..Default::default()
        };
        let plus = estimate_energy(&dom, a, Boundary::Plus, &params).unwrap();
        let free = estimate_energy(&dom, a, Boundary::Free, &params).unwrap();
        assert!(
            plus.mean > 0.0 && free.mean < 0.0,
            "plus {} free {}",
            plus.mean,
            free.mean
        );
        assert!(plus.compatible_with(-free.mean, 4.0));
    }

    #[test]
    fn parallel_chains_match_sequential_merge() {
        // Thread scheduling must not affect the result: the 4-chain estimate
        // equals the estimate built from the same four streams sequentially.
        let dom = unit_cell();
        let a = Point::new(3, 2);
        let params = McParams {
            sweeps: 4000,
            burn_in: 100,
            seed: 21,
            chains: 4,
            ..Default::default()
        };
        let parallel = estimate_energy(&dom, a, Boundary::Plus, &params).unwrap();
        let again = estimate_energy(&dom, a, Boundary::Plus, &params).unwrap();
        assert_eq!(parallel.mean, again.mean);
        assert_eq!(parallel.std_error, again.std_error);
    }

    #[test]
    fn mc_matches_solver_on_12x12() {
        // Larger-domain convergence invariant: the + estimate agrees with
        // the spinor solver within 3 SE at 10⁶ measurement sweeps.
        let dom = DiscreteDomain::from_vertex_set(
            (0..12).flat_map(|j| (0..12).map(move |k| Point::vertex(j, k))),
            1.0,
        );
        let a = dom
            .nearest_horizontal_midpoint(Complex64::new(5.5, 5.5))
            .unwrap();
        let solver = crate::spinor::energy_density(&dom, a).unwrap().0;
        let params = McParams {
            sweeps: 1_000_000,
            burn_in: 10_000,
            seed: 17,
            ..Default::default()
        };
        let est = estimate_energy(&dom, a, Boundary::Plus, &params).unwrap();
        assert!(
            est.compatible_with(solver, 3.0),
            "{} ± {} vs solver {solver}",
            est.mean,
            est.std_error
        );
    }

    #[test]
    fn mc_agrees_with_exact_oracle_on_2x3() {
        let dom = DiscreteDomain::from_vertex_set(
            (0..3).flat_map(|j| (0..2).map(move |k| Point::vertex(j, k))),
            1.0,
        );
        let a = Point::new(1, 0);
        let exact = contours::oracle_energy_plus(&dom, a).unwrap();
        let params = McParams {
            sweeps: 60_000,
            burn_in: 1000,
            seed: 13,
            ..Default::default()
        };
        let est = estimate_energy(&dom, a, Boundary::Plus, &params).unwrap();
        assert!(
            est.compatible_with(exact, 3.0),
            "{} ± {} vs {exact}",
            est.mean,
            est.std_error
        );
    }
}
