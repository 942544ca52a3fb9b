//! Acyclic directed mixed graphs: latent projection to DAGs, m-separation,
//! the PMAR separation pattern and brute-force enumeration.

mod admg;
mod enumerate;
mod format;
mod separation;

pub use admg::{topological_order, to_dag_with_latents, Admg, Dag, DEFAULT_VERTICES};
pub use enumerate::{enumerate_admgs, enumerate_pmar_admgs, EnumerationDomain};
pub use format::{parse_graph, parse_graphs, write_graph, write_graphs};
pub use separation::{is_pmar_pattern, m_separated, PmarVertices};
