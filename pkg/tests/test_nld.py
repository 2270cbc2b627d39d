import math

import pytest

from localdecision.generate import all_instances
from localdecision.graph import Graph, InputError, complete, cycle, path, star
from localdecision.languages import (alternating_path_language, coloring_language,
                                     forest_language, independent_set_language,
                                     size_at_most_language)
from localdecision.nld import (CertificateError, MapCertificate, acceptance_oracle,
                               accepting_target, canonical_bfs_labels, certificate_size_bits,
                               certificates_from_map, exhaustive_certificate_search,
                               format_certificates, honest_certificates, parse_certificates,
                               verify)


def test_wire_format_by_hand():
    cert = MapCertificate(1, cycle(4).graph, (b"",) * 4)
    # adjacency bits (0,1)(0,2)(0,3)(1,2)(1,3)(2,3) = 101101, padded to 10110100
    assert cert.encode() == bytes.fromhex("00040001b4") + b"\x00\x00" * 4
    cert = MapCertificate(2, path(2).graph, (b"ab", b"c"))
    assert cert.encode() == bytes.fromhex("0002000280") + b"\x00\x02ab\x00\x01c"


def test_round_trip():
    for inst in list(all_instances(5, ["", "x", "yz"]))[::17]:
        for cert in honest_certificates(inst):
            assert MapCertificate.decode(cert.encode()) == cert


@pytest.mark.parametrize("data,msg", [
    (b"\x00\x02", "header"),
    (bytes.fromhex("0002000181"), "padding"),
    (bytes.fromhex("00020001800000000000"), "trailing"),
    (bytes.fromhex("0002000180000000"), "truncated input length"),
    (bytes.fromhex("000200018000000005ab"), "truncated input bytes"),
    (bytes.fromhex("00030001") + b"\x80" + b"\x00\x00" * 3, "map graph"),
    (bytes.fromhex("000200038000000000"), "label"),
])
def test_decode_is_strict(data, msg):
    with pytest.raises(CertificateError, match=msg):
        MapCertificate.decode(data)


def test_bfs_labels():
    assert canonical_bfs_labels(cycle(5)) == [1, 2, 4, 5, 3]
    assert sorted(canonical_bfs_labels(star(4))) == [1, 2, 3, 4, 5]


@pytest.mark.parametrize("lang,alpha", [(coloring_language(), "123"),
                                        (forest_language(), [b""]),
                                        (alternating_path_language(), "ab"),
                                        (independent_set_language(), "01")])
def test_honest_certificates_decide_members(lang, alpha):
    for inst in all_instances(5, alpha):
        v = verify(inst, honest_certificates(inst), lang, 1)
        if lang(inst):
            assert v.accepted
        else:
            assert not any(v.per_node)  # test (3) fails everywhere


def test_c8_with_c4_map_fools_the_size_bound():
    lang = size_at_most_language(4)
    certs = certificates_from_map(cycle(4), [u % 4 for u in range(8)])
    assert verify(cycle(8), certs, lang, 1).accepted
    assert not any(verify(cycle(8), honest_certificates(cycle(8)), lang, 1).per_node)
    target, f = accepting_target(cycle(8), lang, 1)
    assert target.node_count == 4 and f.is_onto()


def test_tampering_is_detected():
    lang = coloring_language()
    inst = cycle(6, "121212")
    certs = [c.encode() for c in honest_certificates(inst)]
    assert verify(inst, certs, lang, 1).accepted
    # a wrong label somewhere
    bad = list(certs)
    bad[0] = bad[0][:2] + bad[3][2:4] + bad[0][4:]
    assert not verify(inst, bad, lang, 1).accepted
    # one node claims a different map
    other = MapCertificate(1, cycle(6).graph, tuple(b"121213"[i:i + 1] for i in range(6)))
    bad = list(certs)
    bad[2] = other.encode()
    v = verify(inst, bad, lang, 1)
    assert not v.per_node[1] and not v.per_node[2] and not v.per_node[3]
    # garbage certificate
    bad = list(certs)
    bad[4] = b"\x00"
    assert not verify(inst, bad, lang, 1).accepted


def test_map_must_match_the_ball():
    # a triangle map cannot explain a 4-cycle: balls differ in edge structure at t=2
    lang = size_at_most_language(4)
    certs = certificates_from_map(cycle(3), [0, 1, 2, 0, 1, 2])
    assert verify(cycle(6), certs, lang, 1).accepted
    assert not verify(cycle(6), certs, lang, 2).accepted


def test_exhaustive_search_small_cases():
    lang = coloring_language()
    assert exhaustive_certificate_search(cycle(6, "121212"), lang, 1, (b"1", b"2")) is not None
    assert exhaustive_certificate_search(path(3, "121"), lang, 1, (b"1", b"2")) is not None
    assert exhaustive_certificate_search(path(3, "112"), lang, 1, (b"1", b"2")) is None
    size = size_at_most_language(3)
    found = exhaustive_certificate_search(cycle(6), size, 1, (b"",))
    assert found is not None and verify(cycle(6), found, size, 1).accepted
    assert acceptance_oracle(cycle(6), size, 1)
    assert not acceptance_oracle(path(4), size, 1)
    assert exhaustive_certificate_search(path(4), size, 1, (b"",)) is None
    with pytest.raises(InputError):
        exhaustive_certificate_search(path(2), size, 0, (b"",))


def test_exhaustive_search_agrees_with_oracle_up_to_four_nodes():
    for lang, alpha in [(coloring_language(), (b"1", b"2")),
                        (size_at_most_language(3), (b"",)),
                        (forest_language(), (b"",))]:
        for inst in all_instances(4, alpha):
            found = exhaustive_certificate_search(inst, lang, 1, alpha)
            assert (found is not None) == acceptance_oracle(inst, lang, 1)
            if found is not None:
                assert verify(inst, found, lang, 1).accepted


def test_size_formula():
    for n in range(4, 33):
        bits = certificate_size_bits(honest_certificates(cycle(n)))
        want = 8 * (4 + math.ceil(n * (n - 1) / 2 / 8) + 2 * n)
        assert set(bits) == {want}


def test_cert_text_format(tmp_path):
    certs = honest_certificates(path(3, "abc"))
    text = format_certificates(certs)
    assert parse_certificates(text) == [c.encode() for c in certs]
    with pytest.raises(InputError, match="line 2"):
        parse_certificates("00\nzz\n")
    with pytest.raises(InputError):
        verify(path(3), parse_certificates(text)[:2], coloring_language(), 1)
