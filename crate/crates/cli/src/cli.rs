use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use oklab::rational::parse_rat;
use oklab::{Rat, RatVector};

#[derive(Debug, Parser)]
#[command(
    name = "oklab",
    version,
    about = "Exact computations with Okounkov bodies, big cones and valued function fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Scene file in TOML.
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Seed for randomized sweeps; overrides the scene's `seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Indent the JSON report.
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Okounkov body of a toric divisor with its volume and counting measures.
    Okbody {
        #[command(flatten)]
        common: Common,
        /// Highest level of value sets; defaults to the level reaching every vertex.
        #[arg(long)]
        m_max: Option<u32>,
    },
    /// Section polytope, h0 by level and volume estimates.
    Sections {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        m: u32,
    },
    /// Stable meet and join of the two divisors of the scene.
    Meet {
        #[command(flatten)]
        common: Common,
    },
    /// Star subdivision of a cone, checking that pullback keeps h0.
    Blowup {
        #[command(flatten)]
        common: Common,
        /// Ray indices of the cone to subdivide.
        #[arg(long, value_delimiter = ',', required = true)]
        cone: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        m: u32,
    },
    /// Brunn-Minkowski for the Okounkov bodies of the two divisors.
    Logconcavity {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        m_max: u32,
    },
    /// Finite generators whose semigroup body contains a given polytope.
    InnerApprox {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        m_max: u32,
    },
    /// Dimension and degree of a monomial ideal from its Hilbert function.
    Hilbert {
        #[command(flatten)]
        common: Common,
    },
    /// Zariski decomposition of a class.
    Zariski {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_vector)]
        class: RatVector,
    },
    /// Positive part of a class and its volume.
    Psi {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_vector)]
        class: RatVector,
    },
    /// Difference quotients of vol against twice the positive part.
    DvolCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_vector)]
        class: RatVector,
        #[arg(long, value_parser = parse_vector)]
        gamma: RatVector,
        #[arg(long, value_parser = parse_rational, default_value = "1/16")]
        t: Rat,
    },
    /// Ample approximation of a big class.
    Fujita {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_vector)]
        class: RatVector,
        #[arg(long, value_parser = parse_rational, default_value = "1/10")]
        eps: Rat,
    },
    /// Positive parts of sampled big classes against the dual of the effective cone.
    Sandwich {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Volume bounds; each fully specified group of classes is checked.
    Bounds {
        #[command(flatten)]
        common: Common,
        /// `vol(a - b) >= a^2 - 2 a·b` for nef a, b.
        #[arg(long, value_parser = parse_vector)]
        a: Option<RatVector>,
        #[arg(long, value_parser = parse_vector)]
        b: Option<RatVector>,
        /// Perturbation bound around a nef class.
        #[arg(long, value_parser = parse_vector)]
        beta: Option<RatVector>,
        #[arg(long, value_parser = parse_vector)]
        gamma: Option<RatVector>,
        #[arg(long, value_parser = parse_vector)]
        omega: Option<RatVector>,
        #[arg(long, value_parser = parse_rational)]
        t: Option<Rat>,
        /// Products of nef classes `c1·c2 <= d1·d2`.
        #[arg(long, value_parser = parse_vector)]
        c1: Option<RatVector>,
        #[arg(long, value_parser = parse_vector)]
        c2: Option<RatVector>,
        #[arg(long, value_parser = parse_vector)]
        d1: Option<RatVector>,
        #[arg(long, value_parser = parse_vector)]
        d2: Option<RatVector>,
    },
    /// Measure on the boundary valuations of a toric surface.
    DeltaMeasure {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_vector)]
        class: RatVector,
    },
    /// Signature of a Gram matrix and the Castelnuovo inequality.
    Signature {
        #[command(flatten)]
        common: Common,
        /// Class to test; random integer classes are drawn otherwise.
        #[arg(long, value_parser = parse_vector)]
        class: Option<RatVector>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Kernel of a Gram matrix with nonnegative off-diagonal entries.
    Pdc {
        #[command(flatten)]
        common: Common,
    },
    /// Hyperbolicity axioms, chain inequality and concavity of a multilinear form.
    Hyperbolic {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Shift `s` with `A ∩ (s + C) ⊆ S`, verified on a window.
    Khovanskii {
        #[command(flatten)]
        common: Common,
    },
    /// Whether a point lies in the semigroup.
    Membership {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_vector)]
        point: RatVector,
        #[arg(long, default_value_t = 64)]
        bound: u64,
    },
    /// Level from which `K ∩ Λ/m = K ∩ S_m/m`.
    Saturation {
        #[command(flatten)]
        common: Common,
    },
    /// Cone of the generators: dual, interior test, projection, extension.
    Cone {
        #[command(flatten)]
        common: Common,
        /// Tested against the interior of the dual cone.
        #[arg(long, value_parser = parse_vector)]
        point: Option<RatVector>,
    },
    /// Height of a function.
    Height {
        #[command(flatten)]
        common: Common,
        /// Function in `t`; defaults to the scene's first function.
        #[arg(long)]
        f: Option<String>,
    },
    /// Projective height of the scene's functions.
    ProjectiveHeight {
        #[command(flatten)]
        common: Common,
        /// Functions in `t`; default to the scene's functions.
        #[arg(long)]
        f: Vec<String>,
    },
    /// Divisor of a function and its product-formula residual.
    ProductFormula {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        f: Option<String>,
    },
    /// Integral of a piecewise-linear term in the valuations of the functions.
    TermEval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        term: Option<String>,
    },
    /// Measures on the given places satisfying the product formula.
    Whaples {
        #[command(flatten)]
        common: Common,
    },
    /// Functions read as sections against the measure's slack.
    Adelic {
        #[command(flatten)]
        common: Common,
    },
    /// Chebyshev constant of a real interval.
    Chebyshev {
        #[command(flatten)]
        common: Common,
        /// Relative stopping tolerance of the Remez exchange.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Limit of `a_n / n` for a superadditive sequence.
    Fekete {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Okbody { common, .. }
            | Command::Sections { common, .. }
            | Command::Meet { common }
            | Command::Blowup { common, .. }
            | Command::Logconcavity { common, .. }
            | Command::InnerApprox { common, .. }
            | Command::Hilbert { common }
            | Command::Zariski { common, .. }
            | Command::Psi { common, .. }
            | Command::DvolCheck { common, .. }
            | Command::Fujita { common, .. }
            | Command::Sandwich { common, .. }
            | Command::Bounds { common, .. }
            | Command::DeltaMeasure { common, .. }
            | Command::Signature { common, .. }
            | Command::Pdc { common }
            | Command::Hyperbolic { common, .. }
            | Command::Khovanskii { common }
            | Command::Membership { common, .. }
            | Command::Saturation { common }
            | Command::Cone { common, .. }
            | Command::Height { common, .. }
            | Command::ProjectiveHeight { common, .. }
            | Command::ProductFormula { common, .. }
            | Command::TermEval { common, .. }
            | Command::Whaples { common }
            | Command::Adelic { common }
            | Command::Chebyshev { common, .. }
            | Command::Fekete { common } => common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Okbody { .. } => "okbody",
            Command::Sections { .. } => "sections",
            Command::Meet { .. } => "meet",
            Command::Blowup { .. } => "blowup",
            Command::Logconcavity { .. } => "logconcavity",
            Command::InnerApprox { .. } => "inner-approx",
            Command::Hilbert { .. } => "hilbert",
            Command::Zariski { .. } => "zariski",
            Command::Psi { .. } => "psi",
            Command::DvolCheck { .. } => "dvol-check",
            Command::Fujita { .. } => "fujita",
            Command::Sandwich { .. } => "sandwich",
            Command::Bounds { .. } => "bounds",
            Command::DeltaMeasure { .. } => "delta-measure",
            Command::Signature { .. } => "signature",
            Command::Pdc { .. } => "pdc",
            Command::Hyperbolic { .. } => "hyperbolic",
            Command::Khovanskii { .. } => "khovanskii",
            Command::Membership { .. } => "membership",
            Command::Saturation { .. } => "saturation",
            Command::Cone { .. } => "cone",
            Command::Height { .. } => "height",
            Command::ProjectiveHeight { .. } => "projective-height",
            Command::ProductFormula { .. } => "product-formula",
            Command::TermEval { .. } => "term-eval",
            Command::Whaples { .. } => "whaples",
            Command::Adelic { .. } => "adelic",
            Command::Chebyshev { .. } => "chebyshev",
            Command::Fekete { .. } => "fekete",
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rat, String> {
    parse_rat(s).ok_or_else(|| format!("not a rational number: {s:?}"))
}

/// Comma-separated rationals, e.g. `1,1` or `3,-1/2`.
pub fn parse_vector(s: &str) -> Result<RatVector, String> {
    s.split(',')
        .map(|x| parse_rational(x.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map(RatVector::new)
}
