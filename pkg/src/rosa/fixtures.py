"""Built-in desk knowledge base: seven farms, thirteen cases.

This is the working data set used by the test suite, the docs examples
and anyone who wants a populated KB to poke at.  The vocabulary is the
survey's own (parcs, drailles, bergeries...), the explanations are the
kind of sentences farmers gave, and the policy encodes the one concept
ruling everyone agreed on: an amande figure goes with a champ, never
with a parc.
"""

from __future__ import annotations

from dataclasses import replace

from .cases import CaseStatus, KnowledgeBase
from .graph import (
    Edge,
    EntityVertex,
    FarmGraph,
    GraphMetadata,
    RelationVertex,
    Role,
    RoleVocabulary,
)
from .matching import CompatibilityPolicy
from .taxonomy import Taxonomy, entity, relation

DESK_ROLES = RoleVocabulary((
    Role("sujet"),
    Role("objet"),
    Role("origine", repeatable=True),
    Role("element", repeatable=True),
))


def desk_taxonomy() -> Taxonomy:
    """23 entity concepts and 7 relation concepts from the survey vocabulary."""
    concepts = [
        entity("objet_spatial", "objet spatial",
               attributes=("forme", "legende")),
        entity("surface", parents=("objet_spatial",)),
        entity("surface_en_herbe", "surface en herbe", parents=("surface",)),
        entity("parc", parents=("surface_en_herbe",)),
        entity("parcours", parents=("surface_en_herbe",)),
        entity("prairie", parents=("surface_en_herbe",)),
        entity("pacage", parents=("surface_en_herbe",)),
        entity("surface_cultivee", "surface cultivée", parents=("surface",)),
        entity("champ", parents=("surface_cultivee",)),
        entity("cereales", "céréales", parents=("champ",)),
        entity("bois", parents=("objet_spatial",)),
        entity("batiment", "bâtiment", parents=("objet_spatial",)),
        entity("batiment_exploitation", "bâtiment d'exploitation",
               parents=("batiment",)),
        entity("bergerie", parents=("batiment_exploitation",)),
        entity("amenagement", "aménagement", parents=("objet_spatial",)),
        entity("puits", parents=("amenagement",)),
        entity("chemin", parents=("amenagement",)),
        entity("draille", parents=("chemin",)),
        entity("element_naturel", "élément naturel", parents=("objet_spatial",)),
        entity("ruisseau", parents=("element_naturel",)),
        entity("figure", parents=("objet_spatial",)),
        entity("amande", parents=("figure",)),
        entity("nougat", parents=("figure",)),
        relation("relation_spatiale", "relation spatiale"),
        relation("est_a_cote", "est à côté de", parents=("relation_spatiale",)),
        relation("isole_de", "isole de", parents=("relation_spatiale",)),
        relation("contient", parents=("relation_spatiale",)),
        relation("donne_acces", "donne accès à", parents=("relation_spatiale",)),
        relation("proche_de", "proche de", parents=("relation_spatiale",)),
        relation("entoure", parents=("relation_spatiale",)),
    ]
    return Taxonomy.from_concepts(concepts)


DESK_POLICY = CompatibilityPolicy.build(
    threshold=0.5,
    allowed=[("amande", "champ")],
    forbidden=[("amande", "parc")],
)


def _farm(fid: str, name: str, zone: str, entities, relations, edges,
          choreme_image: str | None = None) -> FarmGraph:
    # entity rows are (id, concept, label) or (id, concept, label, attributes)
    return FarmGraph(
        id=fid,
        metadata=GraphMetadata(farm_name=name, zone=zone,
                               choreme_image=choreme_image),
        entities=tuple(EntityVertex(row[0], row[1], row[2],
                                    dict(row[3]) if len(row) > 3 else {})
                       for row in entities),
        relations=tuple(RelationVertex(i, c, l) for i, c, l in relations),
        edges=tuple(Edge(r, role, e) for r, role, e in edges),
    )


def desk_graphs() -> dict[str, FarmGraph]:
    farms = [
        _farm("f1", "La Jasse", "vallée",
              entities=[
                  ("e_prairie", "prairie", "prairie"),
                  ("e_cereales", "cereales", "céréales"),
                  ("e_ruisseau", "ruisseau", "ruisseau"),
                  ("e_bergerie", "bergerie", "bergerie"),
                  ("e_parc1", "parc", "parc de nuit"),
              ],
              relations=[
                  ("r_isole", "isole_de", "isole de"),
                  ("r_acote", "est_a_cote", "est à côté de"),
              ],
              edges=[
                  ("r_isole", "sujet", "e_prairie"),
                  ("r_isole", "objet", "e_cereales"),
                  ("r_isole", "origine", "e_ruisseau"),
                  ("r_acote", "sujet", "e_bergerie"),
                  ("r_acote", "objet", "e_parc1"),
              ],
              choreme_image="choremes/la-jasse.png"),
        _farm("f2", "Les Grands Devois", "vallée",
              entities=[
                  ("e_parc", "parc", "grand parc"),
                  ("e_bois", "bois", "bois de chênes"),
                  ("e_draille", "draille", "draille"),
              ],
              relations=[
                  ("r_contient", "contient", "contient"),
                  ("r_acces", "donne_acces", "donne accès à"),
              ],
              edges=[
                  ("r_contient", "sujet", "e_parc"),
                  ("r_contient", "objet", "e_bois"),
                  ("r_acces", "sujet", "e_draille"),
                  ("r_acces", "objet", "e_parc"),
              ]),
        _farm("f3", "Mas Neuf", "plaine",
              entities=[
                  ("e_amande", "amande", "amande",
                   {"forme": "amande", "legende": "amandiers"}),
                  ("e_champ", "champ", "champ du mas"),
                  ("e_parc3", "parc", "parc du mas"),
              ],
              relations=[
                  ("r_assoc", "proche_de", "proche de"),
                  ("r_assoc2", "proche_de", "proche de"),
              ],
              edges=[
                  ("r_assoc", "sujet", "e_amande"),
                  ("r_assoc", "objet", "e_champ"),
                  ("r_assoc2", "sujet", "e_amande"),
                  ("r_assoc2", "objet", "e_parc3"),
              ]),
        _farm("f4", "Valdeyron", "serre",
              entities=[
                  ("e_bergerie4", "bergerie", "bergerie"),
                  ("e_puits4", "puits", "puits"),
                  ("e_pacage4", "pacage", "pacage d'hiver"),
              ],
              relations=[
                  ("r_proche4", "proche_de", "proche de"),
                  ("r_acote4", "est_a_cote", "est à côté de"),
              ],
              edges=[
                  ("r_proche4", "sujet", "e_puits4"),
                  ("r_proche4", "objet", "e_bergerie4"),
                  ("r_acote4", "sujet", "e_pacage4"),
                  ("r_acote4", "objet", "e_bergerie4"),
              ]),
        _farm("f5", "Campredon", "vallée",
              entities=[
                  ("e_prairie5", "prairie", "prairie basse"),
                  ("e_champ5", "champ", "champ clos"),
                  ("e_parcours5", "parcours", "parcours"),
                  ("e_cereales5", "cereales", "céréales"),
                  ("e_ruisseau5", "ruisseau", "valat"),
              ],
              relations=[
                  ("r_entoure5", "entoure", "entoure"),
                  ("r_isole5", "isole_de", "isole de"),
              ],
              edges=[
                  ("r_entoure5", "sujet", "e_prairie5"),
                  ("r_entoure5", "objet", "e_champ5"),
                  ("r_isole5", "sujet", "e_parcours5"),
                  ("r_isole5", "objet", "e_cereales5"),
                  ("r_isole5", "origine", "e_ruisseau5"),
              ]),
        _farm("f6", "L'Hort", "plaine",
              entities=[
                  ("e_nougat6", "nougat", "nougat", {"forme": "nougat"}),
                  ("e_champ6", "champ", "champ long"),
                  ("e_parc6", "parc", "parc haut"),
                  ("e_puits6", "puits", "puits du parc"),
              ],
              relations=[
                  ("r_proche6", "proche_de", "proche de"),
                  ("r_contient6", "contient", "contient"),
              ],
              edges=[
                  ("r_proche6", "sujet", "e_nougat6"),
                  ("r_proche6", "objet", "e_champ6"),
                  ("r_contient6", "sujet", "e_parc6"),
                  ("r_contient6", "objet", "e_puits6"),
              ]),
        # f7 is the retrieval target: an exact copy of the f1 isolation
        # pattern, with a second stream feeding the same relation.
        _farm("f7", "Le Devès", "serre",
              entities=[
                  ("e7_prairie", "prairie", "prairie"),
                  ("e7_cereales", "cereales", "céréales"),
                  ("e7_rui1", "ruisseau", "ruisseau"),
                  ("e7_rui2", "ruisseau", "second ruisseau"),
              ],
              relations=[
                  ("r7_isole", "isole_de", "isole de"),
              ],
              edges=[
                  ("r7_isole", "sujet", "e7_prairie"),
                  ("r7_isole", "objet", "e7_cereales"),
                  ("r7_isole", "origine", "e7_rui1"),
                  ("r7_isole", "origine", "e7_rui2"),
              ]),
    ]
    return {g.id: g for g in farms}


FIGURE2_EXPLANATION = (
    "l'agriculteur a placé une {v:e_prairie} pour isoler la parcelle de "
    "{v:e_cereales} du {v:e_ruisseau} afin de protéger les cultures de "
    "l'humidité"
)

_DESK_CASES = [
    # (id, graph, seeds, explanation, status, notes)
    ("c_fig2", "f1", ("r_isole",), FIGURE2_EXPLANATION,
     CaseStatus.VALIDATED, ()),
    ("c_bergerie_parc", "f1", ("r_acote",),
     "la {v:e_bergerie} est à côté du {v:e_parc1} pour rentrer les bêtes "
     "sans les traverser", CaseStatus.DRAFT, ()),
    ("c_parc_bois", "f2", ("r_contient",),
     "le {v:e_parc} contient un {v:e_bois} pour que les bêtes s'abritent "
     "du soleil", CaseStatus.VALIDATED, ()),
    ("c_acces", "f2", ("r_acces",),
     "la {v:e_draille} donne accès au {v:e_parc} pour mener le troupeau",
     CaseStatus.DRAFT, ()),
    ("c_bois_abri", "f2", ("e_bois",),
     "le {v:e_bois} sert d'abri au troupeau", CaseStatus.DRAFT, ()),
    ("c_amande", "f3", ("r_assoc",),
     "l'{v:e_amande} est dessinée près du {v:e_champ} pour signaler la "
     "culture", CaseStatus.DRAFT, ()),
    ("c_amande_parc", "f3", ("r_assoc2",),
     "l'{v:e_amande} marquerait aussi le {v:e_parc3}", CaseStatus.REJECTED,
     ("appariement refusé: une amande va avec un champ, jamais avec un parc",)),
    ("c_puits", "f4", ("r_proche4",),
     "le {v:e_puits4} est proche de la {v:e_bergerie4} pour abreuver le "
     "troupeau au retour", CaseStatus.DRAFT, ()),
    ("c_pacage", "f4", ("r_acote4",),
     "le {v:e_pacage4} est à côté de la {v:e_bergerie4} pour sortir les "
     "bêtes l'hiver", CaseStatus.DRAFT, ()),
    ("c_entoure", "f5", ("r_entoure5",),
     "la {v:e_prairie5} entoure le {v:e_champ5} pour faire tampon autour "
     "de la culture", CaseStatus.DRAFT, ()),
    ("c_isole_parcours", "f5", ("r_isole5",),
     "le {v:e_parcours5} isole les {v:e_cereales5} du {v:e_ruisseau5} pour "
     "garder la culture au sec", CaseStatus.DRAFT, ()),
    ("c_nougat", "f6", ("r_proche6",),
     "le {v:e_nougat6} est dessiné près du {v:e_champ6} pour noter la "
     "parcelle", CaseStatus.DRAFT, ()),
    ("c_parc_puits", "f6", ("r_contient6",),
     "le {v:e_parc6} contient un {v:e_puits6} pour abreuver sur place",
     CaseStatus.DRAFT, ()),
]


def desk_kb() -> KnowledgeBase:
    """The full seven-farm, thirteen-case desk KB at version 0."""
    kb = KnowledgeBase(desk_taxonomy(), DESK_ROLES, policy=DESK_POLICY)
    for g in desk_graphs().values():
        kb = kb.add_graph(g)
    for cid, gid, seeds, explanation, status, notes in _DESK_CASES:
        kb, _ = kb.add_case(gid, seeds, explanation, case_id=cid,
                            status=status, notes=notes)
    return replace(kb, version=0)


def minimal_kb() -> KnowledgeBase:
    """Smallest useful KB: one farm, one case, default policy."""
    tax = Taxonomy.from_concepts([
        entity("objet_spatial", "objet spatial"),
        entity("prairie", parents=("objet_spatial",)),
        entity("champ", parents=("objet_spatial",)),
        relation("relation_spatiale", "relation spatiale"),
        relation("est_a_cote", "est à côté de", parents=("relation_spatiale",)),
    ])
    g = _farm("demo", "Ferme témoin", "",
              entities=[("e_prairie", "prairie", "prairie"),
                        ("e_champ", "champ", "champ")],
              relations=[("r1", "est_a_cote", "est à côté de")],
              edges=[("r1", "sujet", "e_prairie"), ("r1", "objet", "e_champ")])
    kb = KnowledgeBase(tax, DESK_ROLES)
    kb = kb.add_graph(g)
    kb, _ = kb.add_case("demo", ("r1",),
                        "la {v:e_prairie} est à côté du {v:e_champ}",
                        case_id="c_demo")
    return replace(kb, version=0)


def amande_probe_fragment() -> FarmGraph:
    """A figure-association pattern: an amande drawn near some surface."""
    return _farm("probe_case", "", "",
                 entities=[("p_amande", "amande", "amande"),
                           ("p_surface", "surface", "surface")],
                 relations=[("p_rel", "proche_de", "proche de")],
                 edges=[("p_rel", "sujet", "p_amande"),
                        ("p_rel", "objet", "p_surface")])


def amande_probe_target() -> FarmGraph:
    """Target where the amande could structurally land on a champ or a parc."""
    return _farm("probe_target", "", "",
                 entities=[("t_champ", "champ", "champ"),
                           ("t_parc", "parc", "parc"),
                           ("t_s1", "surface", "surface une"),
                           ("t_s2", "surface", "surface deux")],
                 relations=[("t_r1", "proche_de", "proche de"),
                            ("t_r2", "proche_de", "proche de")],
                 edges=[("t_r1", "sujet", "t_champ"),
                        ("t_r1", "objet", "t_s1"),
                        ("t_r2", "sujet", "t_parc"),
                        ("t_r2", "objet", "t_s2")])
