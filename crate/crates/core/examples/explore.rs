use ds_core::harness::corpus::corpus;
use ds_core::poincare::*;
use ds_core::polytope::satake_faces;

fn main() {
    let c = corpus();
    let gens = c.generator_set().unwrap();
    let d = build_domain(&gens).unwrap();
    println!("halfspaces: {}", d.polytope.halfspaces().len());
    println!("vertices: {}", d.polytope.vertices().len());
    println!("bounded: {}", d.polytope.is_bounded_in_chart());
    // map printed vertices to enumerated ones
    let mut vmap = vec![usize::MAX; 6];
    for (i, v) in c.vertices.iter().enumerate() {
        match d.vertex_index_of(v.matrix()) {
            Some(j) => { vmap[i] = j; }
            None => println!("printed vertex {} NOT FOUND", i + 1),
        }
    }
    println!("vmap (printed i+1 -> enumerated): {:?}", vmap);
    let poset = d.poset().unwrap();
    let counts: Vec<usize> = (0..=poset.dim).map(|k| poset.count(k)).collect();
    println!("poset counts by dim: {:?} (dim {})", counts, poset.dim);
    // facet labels: facet F_i misses printed vertex i
    for (fi, f) in d.facets.iter().enumerate() {
        let missing: Vec<usize> = (0..6)
            .filter(|&i| !f.vertices.contains(&vmap[i]))
            .map(|i| i + 1)
            .collect();
        let gname = ["a", "b", "c", "a^-1", "b^-1", "c^-1"][f.generator];
        println!(
            "facet {} = F{:?} generator {} partner {:?}",
            fi, missing, gname, f.partner
        );
    }
    // exactness
    let rep = check_exact(&d).unwrap();
    println!("exactness all_ok: {}", rep.all_ok());
    for p in &rep.pairs {
        println!("  {}", p.detail);
    }
    // ridge cycles
    let cycles = ridge_cycles(&d).unwrap();
    println!("cycles: {}", cycles.len());
    let names = ["a", "b", "c", "a^-1", "b^-1", "c^-1"];
    for (ci, cy) in cycles.iter().enumerate() {
        let rlabel: Vec<String> = cy
            .ridges
            .iter()
            .map(|r| {
                let missing: Vec<usize> = (0..6)
                    .filter(|&i| !r.contains(&vmap[i]))
                    .map(|i| i + 1)
                    .collect();
                format!("r{}{}", missing[0], missing[1])
            })
            .collect();
        let letters: Vec<&str> = cy.letters.iter().map(|&l| names[l]).collect();
        println!("cycle {}: ridges {:?} letters {:?}", ci, rlabel, letters);
        let sums = angle_sum(&d, cy, 10, 1e-6).unwrap();
        println!(
            "  sums(first 3): {:?} inferred_k {:?} failures {}",
            &sums.sums[..3.min(sums.sums.len())],
            sums.inferred_k,
            sums.failures.len()
        );
        for f in sums.failures.iter().take(3) { println!("  FAIL: {}", f); }
    }
    // satake faces
    let sf = satake_faces(&d.polytope, poset).unwrap();
    let t1 = sf.iter().filter(|f| f.satake_type == 1).count();
    let t2 = sf.iter().filter(|f| f.satake_type == 2).count();
    println!("satake faces: {} total, type1 {}, type2 {}", sf.len(), t1, t2);
    println!("finite volume: {:?}", ds_core::polytope::finite_volume(&d.polytope));
}
