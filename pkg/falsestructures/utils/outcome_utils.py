from falsestructures.models.interfaces import VerificationStatus


def aggregate_status(status_list: list[VerificationStatus]) -> VerificationStatus:
    """Aggregate all the status in a list, to return the most important one

    Refuted > Inconclusive > Verified, an empty list is inconclusive

    Args:
        status_list (list[VerificationStatus]): status of several checks
    """
    if VerificationStatus.REFUTED in status_list:
        return VerificationStatus.REFUTED

    if VerificationStatus.INCONCLUSIVE in status_list:
        return VerificationStatus.INCONCLUSIVE

    return VerificationStatus.VERIFIED if len(status_list) > 0 else VerificationStatus.INCONCLUSIVE
