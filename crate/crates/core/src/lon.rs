//! The local optima network: optima as nodes, basin-to-basin transition
//! probabilities under a uniformly random bit flip as weighted directed edges.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::basin::BasinPartition;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub config: u32,
    pub fitness: f64,
    pub basin_size: u64,
}

/// Weighted directed graph over local optima.
///
/// Off-diagonal out-edges are kept in compressed rows sorted by target;
/// self-loop weights are stored separately.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOptimaNetwork {
    nodes: Vec<Node>,
    self_weight: Vec<f64>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    global: usize,
}

/// Builds the network by one pass over every configuration and its neighbours.
///
/// `w_ij` is the fraction of (configuration in basin `i`, bit flip) pairs that
/// land in basin `j`.
pub fn build_lon(partition: &BasinPartition) -> LocalOptimaNetwork {
    let n = partition.n();
    let nv = partition.num_optima();
    let assignment = partition.assignment();

    // Group configurations by basin (counting sort).
    let mut start = vec![0usize; nv + 1];
    for &b in assignment {
        start[b as usize + 1] += 1;
    }
    for i in 0..nv {
        start[i + 1] += start[i];
    }
    let mut cursor = start.clone();
    let mut members = vec![0u32; assignment.len()];
    for (c, &b) in assignment.iter().enumerate() {
        members[cursor[b as usize]] = c as u32;
        cursor[b as usize] += 1;
    }

    let mut counts = vec![0u64; nv];
    let mut touched: Vec<u32> = Vec::new();
    let mut self_weight = Vec::with_capacity(nv);
    let mut offsets = Vec::with_capacity(nv + 1);
    let mut targets = Vec::new();
    let mut weights = Vec::new();
    offsets.push(0);
    for i in 0..nv {
        for &c in &members[start[i]..start[i + 1]] {
            for g in 0..n {
                let j = assignment[(c ^ (1 << g)) as usize];
                if counts[j as usize] == 0 {
                    touched.push(j);
                }
                counts[j as usize] += 1;
            }
        }
        touched.sort_unstable();
        let denom = (n as u64 * (start[i + 1] - start[i]) as u64) as f64;
        let mut own = 0.0;
        for &j in &touched {
            let w = counts[j as usize] as f64 / denom;
            if j as usize == i {
                own = w;
            } else {
                targets.push(j);
                weights.push(w);
            }
            counts[j as usize] = 0;
        }
        touched.clear();
        self_weight.push(own);
        offsets.push(targets.len());
    }

    let nodes = partition
        .basins()
        .iter()
        .map(|b| Node {
            config: b.optimum,
            fitness: b.fitness,
            basin_size: b.size,
        })
        .collect();
    LocalOptimaNetwork {
        nodes,
        self_weight,
        offsets,
        targets,
        weights,
        global: partition.global_index(),
    }
}

impl LocalOptimaNetwork {
    /// Assembles a network from explicit `(source, target, weight)` triples.
    /// Zero weights are dropped; self-loops may be included.
    pub fn from_edges(nodes: Vec<Node>, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let nv = nodes.len();
        if nv == 0 {
            return Err(Error::Format("network has no nodes".into()));
        }
        let mut sorted: Vec<(usize, usize, f64)> =
            edges.iter().copied().filter(|e| e.2 != 0.0).collect();
        sorted.sort_by_key(|e| (e.0, e.1));
        let mut self_weight = vec![0.0; nv];
        let mut offsets = vec![0usize; nv + 1];
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        for (idx, &(i, j, w)) in sorted.iter().enumerate() {
            if i >= nv || j >= nv {
                return Err(Error::Format(format!(
                    "edge ({i}, {j}) references a missing node"
                )));
            }
            if !(w > 0.0 && w <= 1.0) {
                return Err(Error::Format(format!(
                    "edge ({i}, {j}) has weight {w} outside (0, 1]"
                )));
            }
            if idx > 0 && sorted[idx - 1].0 == i && sorted[idx - 1].1 == j {
                return Err(Error::Format(format!("duplicate edge ({i}, {j})")));
            }
            if i == j {
                self_weight[i] = w;
            } else {
                targets.push(j as u32);
                weights.push(w);
                offsets[i + 1] += 1;
            }
        }
        for i in 0..nv {
            offsets[i + 1] += offsets[i];
        }
        let mut global = 0;
        for (i, node) in nodes.iter().enumerate() {
            if node.fitness > nodes[global].fitness {
                global = i;
            }
        }
        Ok(Self {
            nodes,
            self_weight,
            offsets,
            targets,
            weights,
            global,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Directed off-diagonal edge count; self-loops are not counted.
    pub fn num_edges(&self) -> usize {
        self.targets.len()
    }

    pub fn global_node(&self) -> usize {
        self.global
    }

    /// `w_ii`, zero if there is no self-loop.
    pub fn self_weight(&self, i: usize) -> f64 {
        self.self_weight[i]
    }

    /// Off-diagonal out-neighbours of `i` (ascending) and their weights.
    pub fn out_edges(&self, i: usize) -> (&[u32], &[f64]) {
        let r = self.offsets[i]..self.offsets[i + 1];
        (&self.targets[r.clone()], &self.weights[r])
    }

    /// Out-degree ignoring the self-loop.
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// `s_i`, the sum of off-diagonal out-weights.
    pub fn strength(&self, i: usize) -> f64 {
        self.out_edges(i).1.iter().sum()
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.self_weight[i];
        }
        let (t, w) = self.out_edges(i);
        match t.binary_search(&(j as u32)) {
            Ok(pos) => w[pos],
            Err(_) => 0.0,
        }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.weight(i, j) > 0.0
    }

    /// Every stored weight, self-loops first within each source row.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.num_nodes()).flat_map(move |i| {
            let own = (self.self_weight[i] > 0.0).then_some((i, i, self.self_weight[i]));
            let (t, w) = self.out_edges(i);
            own.into_iter()
                .chain(t.iter().zip(w).map(move |(&j, &w)| (i, j as usize, w)))
        })
    }

    /// All off-diagonal weights in row order.
    pub fn off_diagonal_weights(&self) -> &[f64] {
        &self.weights
    }
}

#[derive(Serialize, Deserialize)]
struct NodeRow {
    id: usize,
    config: u32,
    fitness: f64,
    basin_size: u64,
}

#[derive(Serialize, Deserialize)]
struct EdgeRow {
    src: usize,
    dst: usize,
    weight: f64,
}

/// Paths of the three export files for an instance id.
pub fn export_paths(dir: &Path, id: &str) -> (PathBuf, PathBuf, PathBuf) {
    (
        dir.join(format!("{id}.nodes.csv")),
        dir.join(format!("{id}.edges.csv")),
        dir.join(format!("{id}.graphml")),
    )
}

/// Writes the node table and the edge list (self-loops included).
/// Floats use the shortest representation that round-trips exactly.
pub fn export_edge_list(
    lon: &LocalOptimaNetwork,
    nodes_path: impl AsRef<Path>,
    edges_path: impl AsRef<Path>,
) -> Result<()> {
    let mut w = csv::Writer::from_path(nodes_path)?;
    for (id, n) in lon.nodes.iter().enumerate() {
        w.serialize(NodeRow {
            id,
            config: n.config,
            fitness: n.fitness,
            basin_size: n.basin_size,
        })?;
    }
    w.flush()?;
    let mut w = csv::Writer::from_path(edges_path)?;
    for (src, dst, weight) in lon.edges() {
        w.serialize(EdgeRow { src, dst, weight })?;
    }
    w.flush()?;
    Ok(())
}

pub fn import_edge_list(
    nodes_path: impl AsRef<Path>,
    edges_path: impl AsRef<Path>,
) -> Result<LocalOptimaNetwork> {
    let mut nodes = Vec::new();
    for (pos, row) in csv::Reader::from_path(nodes_path)?
        .deserialize()
        .enumerate()
    {
        let row: NodeRow = row?;
        if row.id != pos {
            return Err(Error::Format(format!(
                "node ids must be 0..n in order, found {} at row {pos}",
                row.id
            )));
        }
        nodes.push(Node {
            config: row.config,
            fitness: row.fitness,
            basin_size: row.basin_size,
        });
    }
    let mut edges = Vec::new();
    for row in csv::Reader::from_path(edges_path)?.deserialize() {
        let row: EdgeRow = row?;
        edges.push((row.src, row.dst, row.weight));
    }
    LocalOptimaNetwork::from_edges(nodes, &edges)
}

pub fn export_graphml(lon: &LocalOptimaNetwork, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        w,
        r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#
    )?;
    writeln!(
        w,
        r#"  <key id="config" for="node" attr.name="config" attr.type="long"/>"#
    )?;
    writeln!(
        w,
        r#"  <key id="fitness" for="node" attr.name="fitness" attr.type="double"/>"#
    )?;
    writeln!(
        w,
        r#"  <key id="basin_size" for="node" attr.name="basin_size" attr.type="long"/>"#
    )?;
    writeln!(
        w,
        r#"  <key id="weight" for="edge" attr.name="weight" attr.type="double"/>"#
    )?;
    writeln!(w, r#"  <graph id="lon" edgedefault="directed">"#)?;
    for (id, n) in lon.nodes.iter().enumerate() {
        writeln!(
            w,
            r#"    <node id="n{id}"><data key="config">{}</data><data key="fitness">{:?}</data><data key="basin_size">{}</data></node>"#,
            n.config, n.fitness, n.basin_size
        )?;
    }
    for (src, dst, weight) in lon.edges() {
        writeln!(
            w,
            r#"    <edge source="n{src}" target="n{dst}"><data key="weight">{weight:?}</data></edge>"#
        )?;
    }
    writeln!(w, "  </graph>")?;
    writeln!(w, "</graphml>")?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basin::map_basins;
    use crate::nk::{NeighborhoodModel, NkInstance};

    fn node(config: u32, fitness: f64) -> Node {
        Node {
            config,
            fitness,
            basin_size: 1,
        }
    }

    #[test]
    fn single_basin_is_a_pure_self_loop() {
        let inst = NkInstance::generate(6, 0, NeighborhoodModel::Random, 4).unwrap();
        let lon = build_lon(&map_basins(&inst).unwrap());
        assert_eq!(lon.num_nodes(), 1);
        assert_eq!(lon.num_edges(), 0);
        assert_eq!(lon.self_weight(0), 1.0);
        assert_eq!(lon.edges().collect::<Vec<_>>(), vec![(0, 0, 1.0)]);
    }

    #[test]
    fn rows_are_stochastic_and_support_symmetric() {
        let inst = NkInstance::generate(10, 5, NeighborhoodModel::Random, 8).unwrap();
        let lon = build_lon(&map_basins(&inst).unwrap());
        assert!(lon.num_nodes() > 1);
        for i in 0..lon.num_nodes() {
            let total = lon.self_weight(i) + lon.strength(i);
            assert!((total - 1.0).abs() < 1e-9);
            let (t, _) = lon.out_edges(i);
            for &j in t {
                assert!(lon.has_edge(j as usize, i));
            }
        }
    }

    #[test]
    fn from_edges_validates() {
        let nodes = vec![node(0, 0.1), node(3, 0.4)];
        let lon = LocalOptimaNetwork::from_edges(
            nodes.clone(),
            &[(0, 1, 0.5), (1, 0, 0.25), (0, 0, 0.5), (1, 1, 0.75)],
        )
        .unwrap();
        assert_eq!(lon.global_node(), 1);
        assert_eq!(lon.weight(1, 0), 0.25);
        assert_eq!(lon.weight(0, 0), 0.5);
        assert!(LocalOptimaNetwork::from_edges(nodes.clone(), &[(0, 2, 0.5)]).is_err());
        assert!(LocalOptimaNetwork::from_edges(nodes.clone(), &[(0, 1, 1.5)]).is_err());
        assert!(LocalOptimaNetwork::from_edges(nodes, &[(0, 1, 0.5), (0, 1, 0.5)]).is_err());
    }

    #[test]
    fn export_reimport_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let inst = NkInstance::generate(9, 3, NeighborhoodModel::Random, 21).unwrap();
        let lon = build_lon(&map_basins(&inst).unwrap());
        let (np, ep, gp) = export_paths(dir.path(), "x");
        export_edge_list(&lon, &np, &ep).unwrap();
        export_graphml(&lon, &gp).unwrap();
        let back = import_edge_list(&np, &ep).unwrap();
        assert_eq!(back, lon);

        let rows = std::fs::read_to_string(&ep).unwrap().lines().count() - 1;
        let stored = lon.num_edges()
            + (0..lon.num_nodes())
                .filter(|&i| lon.self_weight(i) > 0.0)
                .count();
        assert_eq!(rows, stored);

        let xml = std::fs::read_to_string(&gp).unwrap();
        assert_eq!(xml.matches("<node ").count(), lon.num_nodes());
        assert_eq!(xml.matches("<edge ").count(), stored);
    }

    #[test]
    fn single_node_export() {
        let dir = tempfile::tempdir().unwrap();
        let lon = LocalOptimaNetwork::from_edges(vec![node(5, 0.7)], &[(0, 0, 1.0)]).unwrap();
        let (np, ep, _) = export_paths(dir.path(), "one");
        export_edge_list(&lon, &np, &ep).unwrap();
        let edges = std::fs::read_to_string(&ep).unwrap();
        assert_eq!(edges, "src,dst,weight\n0,0,1.0\n");
        let nodes = std::fs::read_to_string(&np).unwrap();
        assert_eq!(nodes.lines().count(), 2);
    }
}
