use mfdfa::scaling::{default_q_grid, default_scales};
use mfdfa::synth::{cascade_h_analytic, generate, GeneratorKind, GeneratorSpec};
use mfdfa::{
    delta_h, fit_hurst, fluctuation_surface, legendre, profile, tau, DetrendConfig, Method, Overlap,
};

fn cascade() -> mfdfa::TimeSeries64 {
    let kind = GeneratorKind::BinomialCascade {
        p: 0.75,
        randomize_halves: false,
    };
    generate(&GeneratorSpec::new(kind, 4096, 0)).unwrap()
}

#[test]
fn cascade_pipeline_for_both_methods() {
    let x = cascade();
    let p = profile(&x).unwrap();
    let q = default_q_grid::<f64>();
    let scales = default_scales(x.len(), 1).unwrap();
    let range = (scales[0], *scales.last().unwrap());
    for method in [Method::MfDfa, Method::BiOsw] {
        let surface =
            fluctuation_surface(&p, method, &q, &scales, Overlap::default(), DetrendConfig::default()).unwrap();
        assert!(surface.flagged().is_empty());
        let h = fit_hurst(&surface, range).unwrap();
        assert!(h.is_non_increasing(1e-9), "{method}: {:?}", h.h());
        let h2 = h.h_at(2.0).unwrap();
        assert!((h2 - cascade_h_analytic(0.75, 2.0).unwrap()).abs() < 0.1, "{method}: {h2}");
        assert!(delta_h(&h).unwrap() > 0.5);

        let t = tau(&h);
        let zero = q.iter().position(|&v| v == 0.0).unwrap();
        assert!((t.tau[zero] + 1.0).abs() < 1e-12);
        let spectrum = legendre(&h).unwrap();
        assert!(spectrum.width > 0.5);
        assert!(spectrum.f_alpha.iter().all(|f| *f <= 1.0 + 1e-6));
    }
}
