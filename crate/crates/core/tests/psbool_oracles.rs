use cevian_core::psbool::{
    check_chain_tensor, check_morphism, finite_cone_diagram, make_2p, tensor, tensor_morphism, BoolMorphism,
    PScaledBA,
};

#[test]
fn tensor_of_two_p_is_the_value_at_p() {
    let (s, _) = finite_cone_diagram().unwrap();
    let sizes: Vec<u128> = (0..s.poset.len())
        .map(|q| tensor(&make_2p(&s.poset, s.poset.name(q)).unwrap(), &s).unwrap().size())
        .collect();
    let direct: Vec<u128> = s.objects.iter().map(|o| o.len() as u128).collect();
    assert_eq!(sizes, direct);
}

#[test]
fn chains_of_length_three_tensor_functorially() {
    let (s, _) = finite_cone_diagram().unwrap();
    let p = s.poset.clone();
    let objs = vec![
        PScaledBA::from_tags(p.clone(), &[("a", "1"), ("b", "2")]).unwrap(),
        PScaledBA::from_tags(p.clone(), &[("c", "1"), ("d", "1"), ("e", "2")]).unwrap(),
        PScaledBA::from_tags(p.clone(), &[("f", "1"), ("g", "1"), ("h", "2"), ("i", "2")]).unwrap(),
    ];
    let maps = vec![BoolMorphism { images: vec![0b011, 0b100] }, BoolMorphism { images: vec![0b0001, 0b0010, 0b1100] }];
    for (k, f) in maps.iter().enumerate() {
        check_morphism(&objs[k], &objs[k + 1], f).unwrap();
    }
    check_chain_tensor(&objs, &maps, &s).unwrap();
}

#[test]
fn scale_violations_are_refused() {
    let (s, _) = finite_cone_diagram().unwrap();
    let p = s.poset.clone();
    let a = PScaledBA::from_tags(p.clone(), &[("a", "123")]).unwrap();
    let b = PScaledBA::from_tags(p, &[("c", "1")]).unwrap();
    let f = BoolMorphism { images: vec![1] };
    assert!(check_morphism(&a, &b, &f).is_err());
    assert!(tensor_morphism(&a, &b, &f, &s).is_err());
}
