from .examples import (
    ExampleName,
    GalleryItem,
    adjugate_expansion,
    build_example,
    example_properties,
    flanders_extremal,
    lemma1_witness,
    remark1_example,
    remark2_f2_example,
    sharpness_example,
)
