//! Labeling schemes of planar Cayley graphs: enumeration of the scheme
//! classes of a degree, geometry of the associated tilings, finite balls of the
//! graphs, the word problem, and recognition of full presentations.
//!
//! Generators are 0-based in the API and 1-based in every textual or JSON form.

pub mod catalog;
pub mod coset;
pub mod decider;
pub mod enumeration;
pub mod error;
pub mod geometry;
pub mod real;
pub mod render;
pub mod scheme;
pub mod tiling;
pub mod word;
pub mod word_problem;

pub use catalog::CatalogFile;
pub use decider::{decide_planar, extract_sigma, FullPresentation, Verdict, WordOracle};
pub use enumeration::{burnside_count, enumerate_schemes, schemes_validating, SchemeClass};
pub use error::{Error, Result};
pub use geometry::{classify, solve_edge_length, AngleSolution, GeometryClass};
pub use render::{render_svg, RenderOptions};
pub use scheme::{Dart, FaceLength, LabelingScheme, Presentation, PrimitiveVector, Side, TypeVector};
pub use tiling::{build_ball, euler_characteristic, wp_combinatorial, Ball};
pub use word::GroupWord;
pub use word_problem::WordProblem;
