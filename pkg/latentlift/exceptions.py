# this is the base exception that is thrown by latentlift to make it
# easy to suppress all latentlift exceptions
class LatentLiftException(Exception):

    def __init__(self, *args, **kwargs):
        super(LatentLiftException, self).__init__(*args)
        self.issues_url = 'http://github.com/latentlift/latentlift/issues'

    def render(self, msg):
        return msg % vars(self)


class InvalidAction(LatentLiftException, ValueError):

    def __init__(self, index, n_actions):
        super(InvalidAction, self).__init__()
        self.index = index
        self.n_actions = n_actions

    def __str__(self):
        return self.render('Action index %(index)s is outside the action space [0, %(n_actions)s).')


class UnderfilledBuffer(LatentLiftException):

    def __init__(self, available, requested):
        super(UnderfilledBuffer, self).__init__()
        self.available = available
        self.requested = requested

    def __str__(self):
        return self.render(
            'Only %(available)s entries are stored but %(requested)s were requested. '
            'Collect more experience before sampling.'
        )


class EpisodeFinished(LatentLiftException):

    def __str__(self):
        return 'The episode has finished, call reset() before stepping again.'


class ShapeMismatch(LatentLiftException, ValueError):
    pass


class DivergenceError(LatentLiftException):

    def __init__(self, where, value):
        super(DivergenceError, self).__init__()
        self.where = where
        self.value = value

    def __str__(self):
        return self.render('Training diverged in %(where)s: the loss became %(value)s.')


class UnknownBaseline(LatentLiftException, KeyError):

    def __init__(self, name):
        super(UnknownBaseline, self).__init__()
        self.name = name

    def __str__(self):
        return self.render(
            'Unknown baseline "%(name)s". Registered baselines can be listed with '
            'latentlift.representation.baseline_catalogue.get_all().'
        )


class CheckpointMismatch(LatentLiftException):
    pass


class NoPreimageAction(LatentLiftException):

    def __init__(self, state, abstract_action):
        super(NoPreimageAction, self).__init__()
        self.state = state
        self.abstract_action = abstract_action

    def __str__(self):
        return self.render(
            'No action of state %(state)s maps onto the abstract action %(abstract_action)s, '
            'the action map is not surjective there.'
        )


class InsufficientSeeds(LatentLiftException):

    def __init__(self, available, best_k):
        super(InsufficientSeeds, self).__init__()
        self.available = available
        self.best_k = best_k

    def __str__(self):
        return self.render('Asked for the best %(best_k)s runs but only %(available)s runs were given.')


class EmptyDataset(LatentLiftException):
    pass


class DatasetFormatError(LatentLiftException):
    pass


class ConfigError(LatentLiftException):
    pass


class StageFailure(LatentLiftException):

    def __init__(self, stage, reason):
        super(StageFailure, self).__init__()
        self.stage = stage
        self.reason = reason

    def __str__(self):
        return self.render('Pipeline stage "%(stage)s" failed: %(reason)s')
