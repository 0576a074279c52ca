use ds_core::harness::corpus::corpus;
use ds_core::poincare::*;
use ds_core::polytope::satake_faces;
use ds_core::satake::component_leq;
use ds_core::space::SpacePoint;

fn main() {
    let c = corpus();
    let gens = c.generator_set().unwrap();
    let d = build_domain(&gens).unwrap();
    let poset = d.poset().unwrap();
    let sf = satake_faces(&d.polytope, poset).unwrap();
    let edges: Vec<_> = sf.iter().filter(|f| f.face_dim == 1).cloned().collect();
    let tris: Vec<_> = sf.iter().filter(|f| f.face_dim == 2).cloned().collect();
    println!("satake edges {} triangles {}", edges.len(), tris.len());
    let x = SpacePoint::identity(3);
    let names = ["a", "b", "c", "a^-1", "b^-1", "c^-1"];
    // all 15 edge cycles: fixed point + exact invariance
    let cycles = satake_face_cycles(&d, &edges).unwrap();
    let mut ok = 0;
    for cy in &cycles {
        let alpha = cycle_fixed_point(&edges[cy.face], &cy.word, &x, 64).unwrap();
        let inv = invariance_check(&cy.word, &alpha, Some(&edges[cy.face].component), &x, 5, 99).unwrap();
        if inv.all_ok() { ok += 1; }
    }
    println!("edge cycles with exact invariance: {}/{}", ok, cycles.len());
    // Lemma-5.1 style: triangle face, two edges meeting at a vertex, word
    // mapping edge to edge within the same component.
    let tri = &tris[0];
    println!("triangle vertices {:?}", tri.vertices);
    let tri_edges: Vec<usize> = (0..edges.len())
        .filter(|&i| edges[i].vertices.iter().all(|v| tri.vertices.contains(v)))
        .collect();
    println!("its edges: {:?}", tri_edges.iter().map(|&i| edges[i].vertices.clone()).collect::<Vec<_>>());
    // pick two edges sharing a vertex
    let (e1, e2) = (tri_edges[0], tri_edges[1]);
    let shared_v: Vec<usize> = edges[e1].vertices.iter().copied()
        .filter(|v| edges[e2].vertices.contains(v)).collect();
    println!("edges {:?} and {:?} share vertex {:?}", edges[e1].vertices, edges[e2].vertices, shared_v);
    if let Some(path) = face_pairing_word(&d, &edges, e1, e2).unwrap() {
        let letters: Vec<&str> = path.letters.iter().map(|&l| names[l]).collect();
        println!("word {:?} maps edge {} to edge {}", letters, e1, e2);
        // alpha = the shared vertex class (rank 1)
        let alpha = ds_core::satake::SatakePoint::new(
            d.polytope.vertices()[shared_v[0]].clone()).unwrap();
        // does the word fix alpha?
        let fixed = alpha.transform(path.word.product()).exact_eq(&alpha);
        println!("word fixes shared vertex: {}", fixed);
        // component of the triangle = component of both edges?
        println!("edge1 comp == tri comp: {}", component_leq(&edges[e1].component, &tri.component) && component_leq(&tri.component, &edges[e1].component));
        let m = measure_edge_scaling(&path.word, &alpha, &tri.component, &x, 20, 7).unwrap();
        let rev = path.word.reversed();
        let alpha2 = alpha.transform(path.word.product());
        let comp2 = tri.component.transform(path.word.product()).unwrap();
        let m2 = measure_edge_scaling(&rev, &alpha2, &comp2, &x, 20, 8).unwrap();
        println!("C = {:.12} (spread {:.2e}); reversed C' = {:.12}; C*C' - 1 = {:.3e}",
            m.constant, m.max_relative_spread, m2.constant, m.constant * m2.constant - 1.0);
    } else {
        println!("no word found between edges {} and {}", e1, e2);
    }
}
