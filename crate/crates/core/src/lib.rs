//! Planar flip graphs: full and partial triangulations, bistellar flips,
//! the subdivision poset, triangulation links, vertex connectivity and
//! exact regularity testing.

pub mod export;
pub mod flipgraph;
pub mod generators;
pub mod geom;
pub mod graph;
pub mod poset;
pub mod regularity;
pub mod subdivision;
pub mod triangulation;
pub mod verify;

pub use geom::{Point, PointSet};
pub use graph::{Edge, PlaneGraph, Region};
pub use triangulation::{FlipElement, Kind, Triangulation};
pub use flipgraph::{FlipGraph, FlipKind};
pub use subdivision::Subdivision;
