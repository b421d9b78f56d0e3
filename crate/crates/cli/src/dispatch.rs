//! Which scene kind each subcommand reads and which module operations it runs.

use crate::scene::Kind;

pub struct Route {
    pub command: &'static str,
    pub kind: Kind,
    /// `module::operation` names.
    pub ops: &'static [&'static str],
}

pub const ROUTES: &[Route] = &[
    Route {
        command: "okbody",
        kind: Kind::FanDivisor,
        ops: &[
            "toric_series::section_polytope",
            "okounkov::value_set",
            "okounkov::okounkov_body",
            "okounkov::measure_report",
            "exactgeom::hull",
            "exactgeom::polytope_volume",
        ],
    },
    Route {
        command: "sections",
        kind: Kind::FanDivisor,
        ops: &[
            "toric_series::section_polytope",
            "toric_series::h0",
            "toric_series::volume_sections",
            "toric_series::is_nef",
            "toric_series::is_ample",
        ],
    },
    Route {
        command: "meet",
        kind: Kind::FanDivisor,
        ops: &["toric_series::stable_meet", "toric_series::stable_join"],
    },
    Route {
        command: "blowup",
        kind: Kind::FanDivisor,
        ops: &["toric_series::blowup_fan", "toric_series::h0"],
    },
    Route {
        command: "logconcavity",
        kind: Kind::FanDivisor,
        ops: &["okounkov::logconcavity_check"],
    },
    Route {
        command: "inner-approx",
        kind: Kind::FanDivisor,
        ops: &["okounkov::inner_approx", "semigroups::saturation_level"],
    },
    Route {
        command: "hilbert",
        kind: Kind::FanDivisor,
        ops: &["toric_series::hilbert_degree"],
    },
    Route {
        command: "zariski",
        kind: Kind::Surface,
        ops: &["bigcone::psi", "bigcone::vol"],
    },
    Route {
        command: "psi",
        kind: Kind::Surface,
        ops: &["bigcone::psi", "bigcone::vol"],
    },
    Route {
        command: "dvol-check",
        kind: Kind::Surface,
        ops: &["bigcone::dvol_check"],
    },
    Route {
        command: "fujita",
        kind: Kind::Surface,
        ops: &["bigcone::fujita_approx"],
    },
    Route {
        command: "sandwich",
        kind: Kind::Surface,
        ops: &["bigcone::duality_sandwich_check"],
    },
    Route {
        command: "bounds",
        kind: Kind::Surface,
        ops: &[
            "bigcone::bound_difference_check",
            "bigcone::bound_perturbation_check",
            "bigcone::monotone_product_check",
        ],
    },
    Route {
        command: "delta-measure",
        kind: Kind::Surface,
        ops: &["gvf::delta_measure"],
    },
    Route {
        command: "signature",
        kind: Kind::Form,
        ops: &["forms::signature", "forms::castelnuovo_check"],
    },
    Route {
        command: "pdc",
        kind: Kind::Form,
        ops: &["forms::pdc_analysis"],
    },
    Route {
        command: "hyperbolic",
        kind: Kind::Form,
        ops: &[
            "forms::eval",
            "forms::rectangle_form",
            "forms::hyperbolic_axioms_check",
            "forms::chain_inequality_check",
            "forms::volume_root_concavity_check",
            "forms::calabi_kernel_check",
        ],
    },
    Route {
        command: "khovanskii",
        kind: Kind::Semigroup,
        ops: &[
            "semigroups::khovanskii_shift",
            "semigroups::group_closure",
            "semigroups::cone_closure",
        ],
    },
    Route {
        command: "membership",
        kind: Kind::Semigroup,
        ops: &["semigroups::membership"],
    },
    Route {
        command: "saturation",
        kind: Kind::Semigroup,
        ops: &["semigroups::saturation_level"],
    },
    Route {
        command: "cone",
        kind: Kind::Semigroup,
        ops: &[
            "semigroups::cone_closure",
            "exactgeom::dual_cone",
            "exactgeom::interior_contains",
            "exactgeom::project_cone",
            "exactgeom::riesz_extend",
            "exactgeom::hull",
            "exactgeom::polytope_volume",
        ],
    },
    Route {
        command: "height",
        kind: Kind::GvfMeasure,
        ops: &["gvf::height"],
    },
    Route {
        command: "projective-height",
        kind: Kind::GvfMeasure,
        ops: &["gvf::projective_height"],
    },
    Route {
        command: "product-formula",
        kind: Kind::GvfMeasure,
        ops: &["gvf::divisor_of", "gvf::product_formula_residual"],
    },
    Route {
        command: "term-eval",
        kind: Kind::GvfMeasure,
        ops: &["gvf::eval_term"],
    },
    Route {
        command: "whaples",
        kind: Kind::GvfMeasure,
        ops: &["gvf::artin_whaples_solve"],
    },
    Route {
        command: "adelic",
        kind: Kind::GvfMeasure,
        ops: &["gvf::adelic_consistency_check"],
    },
    Route {
        command: "chebyshev",
        kind: Kind::Chebyshev,
        ops: &["gvf::chebyshev_constant"],
    },
    Route {
        command: "fekete",
        kind: Kind::Chebyshev,
        ops: &["gvf::fekete_limit"],
    },
];

pub fn route(command: &str) -> Option<&'static Route> {
    ROUTES.iter().find(|r| r.command == command)
}
