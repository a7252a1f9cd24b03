//! Mutable sampler state: cluster labels, occupied clusters and alpha.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::params::ClusterParams;
use crate::real::Real;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterEntry<T> {
    pub params: ClusterParams<T>,
    pub count: usize,
}

/// Current partition of the subjects plus per-cluster parameters.
///
/// Cluster ids are fresh monotonically increasing integers and are never
/// reused within a run, which keeps trace analysis unambiguous. The map is
/// ordered so iteration order (and therefore the consumed randomness) is
/// deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterState<T> {
    labels: Vec<usize>,
    clusters: BTreeMap<usize, ClusterEntry<T>>,
    alpha: T,
    next_id: usize,
}

impl<T: Real> ClusterState<T> {
    pub(crate) fn from_parts(
        labels: Vec<usize>,
        clusters: BTreeMap<usize, ClusterEntry<T>>,
        alpha: T,
    ) -> Self {
        let next_id = clusters.keys().max().map_or(0, |k| k + 1);
        Self {
            labels,
            clusters,
            alpha,
            next_id,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of occupied clusters.
    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub(crate) fn set_alpha(&mut self, alpha: T) {
        self.alpha = alpha;
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, subject: usize) -> usize {
        self.labels[subject]
    }

    pub fn clusters(&self) -> impl Iterator<Item = (usize, &ClusterEntry<T>)> {
        self.clusters.iter().map(|(&id, e)| (id, e))
    }

    pub fn cluster(&self, id: usize) -> Option<&ClusterEntry<T>> {
        self.clusters.get(&id)
    }

    pub fn cluster_ids(&self) -> Vec<usize> {
        self.clusters.keys().copied().collect()
    }

    pub(crate) fn params_mut(&mut self, id: usize) -> &mut ClusterParams<T> {
        &mut self.clusters.get_mut(&id).expect("live cluster id").params
    }

    /// Subject indices per occupied cluster, in id order.
    pub fn members(&self) -> Vec<(usize, Vec<usize>)> {
        let mut out: BTreeMap<usize, Vec<usize>> =
            self.clusters.keys().map(|&id| (id, Vec::new())).collect();
        for (subject, &label) in self.labels.iter().enumerate() {
            out.get_mut(&label).expect("label refers to live cluster").push(subject);
        }
        out.into_iter().collect()
    }

    /// Detach subject `i` from its cluster. If the cluster empties it is
    /// removed and returned so the assignment step can offer it for reuse.
    pub(crate) fn detach(&mut self, subject: usize) -> Option<(usize, ClusterParams<T>)> {
        let id = self.labels[subject];
        let entry = self.clusters.get_mut(&id).expect("live cluster id");
        if entry.count == 1 {
            let entry = self.clusters.remove(&id).unwrap();
            Some((id, entry.params))
        } else {
            entry.count -= 1;
            None
        }
    }

    pub(crate) fn attach_existing(&mut self, subject: usize, id: usize) {
        self.clusters.get_mut(&id).expect("live cluster id").count += 1;
        self.labels[subject] = id;
    }

    /// Re-insert a detached singleton under its original id.
    pub(crate) fn reinstate(&mut self, subject: usize, id: usize, params: ClusterParams<T>) {
        let prev = self.clusters.insert(id, ClusterEntry { params, count: 1 });
        debug_assert!(prev.is_none());
        self.labels[subject] = id;
    }

    /// Open a brand-new cluster for `subject` with a fresh id.
    pub(crate) fn open_cluster(&mut self, subject: usize, params: ClusterParams<T>) -> usize {
        let id = self.next_id;
        self.next_id += 1;
        self.clusters.insert(id, ClusterEntry { params, count: 1 });
        self.labels[subject] = id;
        id
    }

    /// Structural invariants: labels refer to live clusters, member counts
    /// match label multiplicities and sum to `n`, no empty clusters.
    pub fn check_consistency(&self) -> Result<()> {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &label in &self.labels {
            if !self.clusters.contains_key(&label) {
                return Err(Error::Config(format!("label {label} has no live cluster")));
            }
            *counts.entry(label).or_insert(0) += 1;
        }
        for (&id, entry) in &self.clusters {
            let seen = counts.get(&id).copied().unwrap_or(0);
            if seen == 0 {
                return Err(Error::Config(format!("cluster {id} is empty")));
            }
            if seen != entry.count {
                return Err(Error::Config(format!(
                    "cluster {id} count {} does not match {} labels",
                    entry.count, seen
                )));
            }
        }
        let total: usize = self.clusters.values().map(|e| e.count).sum();
        if total != self.labels.len() {
            return Err(Error::Config(format!(
                "cluster counts sum to {total}, expected {}",
                self.labels.len()
            )));
        }
        Ok(())
    }
}
