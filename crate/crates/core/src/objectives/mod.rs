//! Objective families with closed-form values and analytic gradients.

pub mod bumps;
pub mod compose;
pub mod flid;
pub mod gibbs;
pub mod influence;
pub mod meanfield;
pub mod quadratic;
pub mod revenue;
pub mod sampling;
pub mod setcover;
pub mod softmax;

pub use bumps::TwoBumps;
pub use compose::{compose, Composed, Direction, IdentityMap, Jacobian, MapFlags, Shape, VectorMap};
pub use flid::FlidObjective;
pub use gibbs::{GibbsPolynomial, Term};
pub use influence::{Activation, ActivationMap, InfluenceObjective};
pub use meanfield::MeanFieldKLObjective;
pub use quadratic::QuadraticObjective;
pub use revenue::RevenueIEObjective;
pub use sampling::{hoeffding_epsilon, multilinear_sample_estimate, multilinear_sample_value, SampledMultilinear};
pub use setcover::{Concept, SetCoverObjective};
pub use softmax::SoftmaxObjective;
