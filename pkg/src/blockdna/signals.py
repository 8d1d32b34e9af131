"""
Signal support for blockdna.

Stages of the storage pipeline announce their results through named signals
so that experiments can collect traces without threading callbacks through
every call. Signal support is optional and requires the blinker library.
"""

try:
    from blinker import signal
    SIGNAL_SUPPORT = True
except ImportError:
    SIGNAL_SUPPORT = False

    def signal(*args, **kwargs):
        """Dummy signal function when blinker is not available."""
        class DummySignal:
            def connect(self, *args, **kwargs):
                pass

            def disconnect(self, *args, **kwargs):
                pass

            def send(self, *args, **kwargs):
                pass

        return DummySignal()


# Encoding
strands_built = signal('strands_built')

# Simulated wetlab
pre_pcr = signal('pre_pcr')
post_pcr = signal('post_pcr')
reads_sampled = signal('reads_sampled')
pools_mixed = signal('pools_mixed')

# Decoding
cluster_reconstructed = signal('cluster_reconstructed')
strand_discarded = signal('strand_discarded')
unit_decoded = signal('unit_decoded')


def handler(event):
    """Receiver decorator scoped to one sender.

    The decorated function gains an ``apply`` attribute that connects it to
    ``event`` for a single sender, usually a partition manifest::

        @handler(strands_built)
        def on_built(sender, **kwargs): ...

        on_built.apply(encoded.manifest)
    """
    def decorator(fn):
        def apply(sender):
            event.connect(fn, sender=sender)
            return sender

        fn.apply = apply
        return fn

    return decorator
