use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinergy::flow::kernel::FlowKernel;
use spinergy::functional::gradient::spinor_gradient_and_energy;
use spinergy::functional::{dirac, random_unit_spinor, SpinorField};
use spinergy::geometry::{FlatMetric, Grid, Lattice, SpinCharacter};
use spinergy::immersion::{willmore_revolution, HandleProfile};
use spinergy::Quaternion;

fn spinor(n: usize) -> SpinorField {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let metric = FlatMetric::from_lattice(&Lattice::square(1.0).unwrap());
    random_unit_spinor(Grid::new(n).unwrap(), SpinCharacter::TRIVIAL, metric, &mut rng)
}

fn flow_kernel(c: &mut Criterion) {
    let mut group = c.benchmark_group("flow_kernel");
    for n in [64, 128] {
        let phi = spinor(n);
        let k = FlowKernel::new(phi.grid(), phi.chi().signs(), phi.metric());
        let len = k.len();
        let mut q = vec![Quaternion::ZERO; len];
        let mut lap = vec![Quaternion::ZERO; len];
        let mut tmp = vec![Quaternion::ZERO; len];
        let mut dots = vec![0.0; len];
        group.bench_with_input(BenchmarkId::new("rough_laplacian", n), &n, |b, _| {
            b.iter(|| k.rough_laplacian(black_box(phi.values()), &mut lap, &mut tmp))
        });
        group.bench_with_input(BenchmarkId::new("gradient", n), &n, |b, _| {
            b.iter(|| k.gradient(black_box(phi.values()), &mut q, &mut lap, &mut tmp, &mut dots))
        });
    }
    group.finish();
}

fn reference_operators(c: &mut Criterion) {
    let phi = spinor(64);
    c.bench_function("reference_gradient_64", |b| {
        b.iter(|| spinor_gradient_and_energy(black_box(phi.field()), phi.metric()))
    });
    c.bench_function("dirac_64", |b| b.iter(|| dirac(black_box(&phi))));
}

fn handle_quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("handle_willmore");
    for l in [1.0, 100.0] {
        let profile = HandleProfile::new(l).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(l), &profile, |b, p| {
            b.iter(|| willmore_revolution(black_box(p), false).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, flow_kernel, reference_operators, handle_quadrature);
criterion_main!(benches);
