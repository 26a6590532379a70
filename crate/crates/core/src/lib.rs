//! Sphere-cover approximation of robot collision geometry.
//!
//! The crate takes triangle meshes (or whole URDF robot descriptions) and
//! produces a set of spheres that conservatively covers the geometry. The
//! pipeline has three stages: mesh repair (watertight reconstruction,
//! quadric simplification, HC smoothing), sphere fitting (an adaptive
//! medial-axis method plus a voxel-grid baseline), and URDF rewriting so a
//! robot's `<collision>` tags contain only `<sphere>` primitives.
//!
//! A small benchmark module measures collision-check and distance-query
//! times for the original mesh model against the spherized model in random
//! obstacle environments.

pub mod bench;
pub mod error;
pub mod geometry;
pub mod preprocess;
pub mod spherize;
pub mod urdf;

pub use error::{Error, Result};
pub use geometry::{
    minimal_enclosing_sphere, sample_surface, shrink_ball, validate_mesh, Aabb, MeshBvh,
    MeshReport, Point3, Sphere, SphereSet, SurfaceSample, TriangleMesh, Vector3,
};
pub use preprocess::{make_watertight, process_mesh, simplify_qem, smooth_manifold, ProcessConfig};
pub use spherize::{
    fidelity_report, spherize_grid, spherize_medial, spherize_mesh, verify_coverage,
    CoverageReport, SphereTree, SpherizationConfig, SpherizeMethod, SpherizeResult,
};
pub use urdf::{
    forward_kinematics, get_urdf_meshes, load_urdf, save_urdf, set_urdf_spheres,
    spherize_primitive, CollisionGeometry, GeometryKind, Joint, JointKind, Link, Pose, RobotModel,
};
