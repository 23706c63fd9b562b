//! Every example runs to completion.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run().unwrap();
        }
    };
}

example!(newton_polytopes);
example!(real_roots_1d);
example!(beta_table);
example!(torus_roots);
example!(crofton);
example!(asymptotic_bodies);
example!(ellipsoid_mixed_volumes);
example!(exponential_sums);
example!(pseudovolume);
