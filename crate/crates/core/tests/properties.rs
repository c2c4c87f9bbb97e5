use std::sync::Arc;

use proptest::prelude::*;

use rosenau_core::fem::{assemble_mass, assemble_stiffness, FunctionSpace};
use rosenau_core::mesh::{generate_rect_mesh, read_mesh, write_mesh, Mesh, Rect};
use rosenau_core::sparse::{CsrMatrix, SparseLu};

fn perturbed_mesh(nx: usize, ny: usize, rect: Rect<f64>, jitter: &[f64]) -> Mesh<f64> {
    let base = generate_rect_mesh(nx, ny, rect).unwrap();
    let (hx, hy) = ((rect.x1 - rect.x0) / nx as f64, (rect.y1 - rect.y0) / ny as f64);
    let coords: Vec<[f64; 2]> = (0..base.n_nodes())
        .map(|i| {
            let [x, y] = base.point(i);
            if base.is_boundary_node(i) {
                [x, y]
            } else {
                let j = jitter[i % jitter.len()];
                [x + 0.2 * hx * j, y - 0.2 * hy * j]
            }
        })
        .collect();
    let cells = base.cells().iter().map(|c| c.vertex_ids().to_vec()).collect();
    Mesh::new_checked(2, coords, cells, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mesh_file_round_trip_is_exact(
        nx in 1usize..6,
        ny in 1usize..6,
        x0 in -3.0f64..3.0,
        w in 0.1f64..5.0,
        y0 in -3.0f64..3.0,
        hgt in 0.1f64..5.0,
        jitter in prop::collection::vec(-1.0f64..1.0, 1..8),
    ) {
        let mesh = perturbed_mesh(nx, ny, Rect::new(x0, x0 + w, y0, y0 + hgt), &jitter);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.mesh");
        write_mesh(&mesh, std::fs::File::create(&path).unwrap()).unwrap();
        let back: Mesh<f64> = read_mesh(&path).unwrap();
        prop_assert_eq!(back.n_nodes(), mesh.n_nodes());
        for i in 0..mesh.n_nodes() {
            prop_assert_eq!(back.point(i), mesh.point(i));
        }
        let ids = |m: &Mesh<f64>| m.cells().iter().map(|c| c.vertex_ids().to_vec()).collect::<Vec<_>>();
        prop_assert_eq!(ids(&back), ids(&mesh));
        prop_assert_eq!(back.boundary(), mesh.boundary());
    }

    #[test]
    fn shifted_stiffness_systems_are_solved(
        n in 2usize..6,
        degree in 1usize..3,
        shift in 0.01f64..10.0,
        seed in prop::collection::vec(-1.0f64..1.0, 1..16),
    ) {
        let mesh = Arc::new(generate_rect_mesh(n, n, Rect::unit()).unwrap());
        let s = FunctionSpace::new(mesh, degree).unwrap();
        let a: CsrMatrix<f64> = assemble_stiffness(&s, &s).unwrap()
            .linear_combination(1.0, &assemble_mass(&s, &s).unwrap(), shift).unwrap();
        let x: Vec<f64> = (0..s.n_dofs()).map(|i| seed[i % seed.len()] + i as f64 * 1e-3).collect();
        let b = a.spmv(&x).unwrap();
        let got = SparseLu::factor(&a).unwrap().solve(&b).unwrap();
        let err = got.iter().zip(&x).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-9, "error {}", err);
    }
}
