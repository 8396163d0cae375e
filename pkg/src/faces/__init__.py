from .faces import (
    ChamberFace, FaceData, Verdict, FaceVerifier, face_of, enumerate_faces,
    canonical_face, is_collinear, hypothesis_met, admissible_types
)

__all__ = [
    'ChamberFace', 'FaceData', 'Verdict', 'FaceVerifier', 'face_of', 'enumerate_faces',
    'canonical_face', 'is_collinear', 'hypothesis_met', 'admissible_types'
]
