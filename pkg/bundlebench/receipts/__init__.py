from .receipt import canonicalize, chain_records, create_receipt, receipt_summary, verify_receipt

__all__ = ["canonicalize", "chain_records", "create_receipt", "receipt_summary", "verify_receipt"]
