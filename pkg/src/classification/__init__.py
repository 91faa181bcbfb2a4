"""Classification of the closure of {2^m lambda^n}"""

from .continued_fraction import convergents, rational_approx
from .lambda_class import LambdaClass, classify_lambda, closure_cloud, cloud_oracle, fundamental_cloud

__all__ = [
    "convergents",
    "rational_approx",
    "LambdaClass",
    "classify_lambda",
    "closure_cloud",
    "cloud_oracle",
    "fundamental_cloud",
]
