from .closure import closure_iso, closure_iso_inverse, cube_retraction, xcl_membership
from .edmondson import (
    EdmondsonSpace,
    classic_instance,
    edmondson_membership,
    edmondson_n5_witness,
    edmondson_ops,
    pentagon_instance,
)
from .functor import functor_map
from .pairs import PairConstraintSet, delta_s_closure_check, delta_s_hasse_edges, delta_s_membership
from .product import product_iso, product_iso_inverse
from .stitch import StitchFamily, stitch, stitch_delta_check
from .thicken import ThickenedSpace, thick_join, thick_meet, thick_membership, thick_ops
