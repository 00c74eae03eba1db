use deligne_lab::abelian::{FgAbGroup, IntMatrix};
use deligne_lab::simplicial::builders::{circle, cone};
use deligne_lab::simplicial::{local_system_cohomology, twisted_coboundary, SignCocycle};
use deligne_lab::twisted::twisted_sign_cohomology;
use deligne_lab::Error;

#[test]
fn hexagon_flip_brute_force() {
    let c = circle(6).unwrap();
    let eps = SignCocycle::from_negative_edges(&c, &[[0, 5]]).unwrap();
    // H¹ is the cokernel of the 6x6 twisted coboundary
    let d: IntMatrix = twisted_coboundary(&c, &eps, 0);
    assert_eq!(FgAbGroup::presented(&d.transpose()), FgAbGroup::cyclic(2));
    assert_eq!(twisted_sign_cohomology(&c, &eps).unwrap(), (FgAbGroup::zero(), FgAbGroup::cyclic(2)));
}

#[test]
fn flipped_edge_does_not_extend_over_the_disk() {
    let disk = cone(&circle(6).unwrap());
    assert!(matches!(SignCocycle::from_negative_edges(&disk, &[[0, 5]]), Err(Error::NotACocycle(_))));
}

#[test]
fn every_sign_cocycle_on_the_disk_is_trivial_up_to_gauge() {
    let disk = cone(&circle(6).unwrap());
    // flip every edge at vertex 0: a coboundary
    let eps = SignCocycle::from_negative_edges(&disk, &[[0, 1], [0, 5], [0, 6]]).unwrap();
    assert!(!eps.is_trivial());
    assert_eq!(local_system_cohomology(&disk, &eps), vec![FgAbGroup::free(1), FgAbGroup::zero(), FgAbGroup::zero()]);
    assert_eq!(twisted_sign_cohomology(&disk, &eps).unwrap(), (FgAbGroup::free(1), FgAbGroup::zero()));
}
